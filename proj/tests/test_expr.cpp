#include <catch2/catch_amalgamated.hpp>

#include "lockstep/eval.hpp"
#include "lockstep/network.hpp"

using namespace lockstep;

namespace {

// The cloud-provider route record: local preference, path length, and an
// internal tag, wrapped in an option for the null route.
Sort route_record() {
  return Sort::record({{"lp", Sort::bitvec(32)}, {"len", Sort::integer()}, {"tag", Sort::boolean()}});
}

Sort route_sort() { return Sort::option(route_record()); }

Value mk_route(std::uint64_t lp, long long len, bool tag) {
  return Value::some(Value::record(
      route_record(), {Value::bitvec(32, lp), Value::integer(len), Value::boolean(tag)}));
}

Value null_route() { return Value::none(route_sort()); }

// merge: prefer non-null, then higher lp, then shorter len.
Expr merge_expr() {
  Expr s1 = Expr::var("s1");
  Expr s2 = Expr::var("s2");
  Expr better = Expr::or_(
      {Expr::lt(Expr::get(Expr::var("r2"), "lp"), Expr::get(Expr::var("r1"), "lp")),
       Expr::and_({Expr::eq(Expr::get(Expr::var("r1"), "lp"), Expr::get(Expr::var("r2"), "lp")),
                   Expr::leq(Expr::get(Expr::var("r1"), "len"), Expr::get(Expr::var("r2"), "len"))})});
  return Expr::option_case(s1, s2, "r1",
                           Expr::option_case(s2, s1, "r2", Expr::if_(better, s1, s2)));
}

}  // namespace

TEST_CASE("sorts compare structurally") {
  CHECK(route_sort() == Sort::option(route_record()));
  CHECK(route_sort() != Sort::option(Sort::integer()));
  CHECK(Sort::bitvec(32) != Sort::bitvec(16));
  CHECK(Sort::record({{"a", Sort::integer()}}) != Sort::record({{"b", Sort::integer()}}));
  CHECK_THROWS_AS(Sort::record({{"a", Sort::integer()}, {"a", Sort::boolean()}}), Error);
  CHECK_THROWS_AS(Sort::enumeration({"x", "x"}), Error);
  CHECK_THROWS_AS(Sort::enumeration({}), Error);
}

TEST_CASE("field projection infers the field sort") {
  SortEnv env{{"s", route_record()}};
  CHECK(sort_check(Expr::get(Expr::var("s"), "lp"), env) == Sort::bitvec(32));
  CHECK(sort_check(Expr::get(Expr::var("s"), "len"), env) == Sort::integer());
}

TEST_CASE("if branches must agree") {
  SortEnv env{{"x", Sort::integer()}};
  Expr bad = Expr::if_(Expr::lt(Expr::var("x"), Expr::lit_int(3)), Expr::lit_bool(true), Expr::lit_int(0));
  CHECK_THROWS_AS(sort_check(bad, env), SortError);
}

TEST_CASE("option case eliminates into a common sort") {
  Expr e = Expr::option_case(Expr::none(route_record()), Expr::lit_int(0), "r",
                             Expr::get(Expr::var("r"), "len"));
  CHECK(sort_check(e, {}) == Sort::integer());
}

TEST_CASE("unbound variables are reported with their name") {
  try {
    sort_check(Expr::var("ghost"), {});
    FAIL("expected UnboundVar");
  } catch (const UnboundVar& e) {
    CHECK(e.name == "ghost");
  }
}

TEST_CASE("merge prefers non-null, then local preference, then length") {
  ValueEnv env;
  auto merged = [&](const Value& a, const Value& b) {
    ValueEnv e{{"s1", a}, {"s2", b}};
    return eval_expr(merge_expr(), e);
  };
  CHECK(merged(mk_route(100, 2, false), null_route()) == mk_route(100, 2, false));
  CHECK(merged(mk_route(100, 2, false), mk_route(200, 5, true)) == mk_route(200, 5, true));
  CHECK(merged(mk_route(200, 2, false), mk_route(200, 5, true)) == mk_route(200, 2, false));
}

TEST_CASE("int subtraction saturates at zero") {
  Expr e = Expr::sub(Expr::lit_int(2), Expr::lit_int(5));
  CHECK(eval_expr(e, {}) == Value::integer(0));
  Expr e2 = Expr::sub(Expr::lit_int(5), Expr::lit_int(2));
  CHECK(eval_expr(e2, {}) == Value::integer(3));
}

TEST_CASE("bitvec arithmetic wraps at the declared width") {
  Expr e = Expr::add(Expr::lit(Value::bitvec(8, 250)), Expr::lit(Value::bitvec(8, 10)));
  CHECK(eval_expr(e, {}) == Value::bitvec(8, 4));
}

TEST_CASE("set contains and insert work over literal strings") {
  Value tags = Value::string_set({"D"});
  ValueEnv env{{"tags", tags}};
  CHECK(eval_expr(Expr::contains(Expr::var("tags"), "D"), env) == Value::boolean(true));
  CHECK(eval_expr(Expr::contains(Expr::var("tags"), "BTE"), env) == Value::boolean(false));
  CHECK(eval_expr(Expr::insert(Expr::var("tags"), "BTE"), env) ==
        Value::string_set({"D", "BTE"}));
}

TEST_CASE("record with replaces a single field") {
  Value r = Value::record(route_record(),
                          {Value::bitvec(32, 100), Value::integer(0), Value::boolean(false)});
  ValueEnv env{{"r", r}};
  Value out = eval_expr(Expr::with(Expr::var("r"), "tag", Expr::lit_bool(true)), env);
  CHECK(out.field("tag") == Value::boolean(true));
  CHECK(out.field("lp") == Value::bitvec(32, 100));
}

TEST_CASE("sort preservation: evaluation conforms to inference") {
  std::mt19937_64 rng(7);
  std::vector<std::string> alphabet{"D", "BTE"};
  for (int i = 0; i < 200; ++i) {
    Value v = random_value(route_sort(), rng, alphabet);
    Expr probe = Expr::option_case(Expr::lit(v), Expr::lit_int(0), "r", Expr::get(Expr::var("r"), "len"));
    Sort inferred = sort_check(probe, {});
    Value out = eval_expr(probe, {});
    CHECK(out.sort() == inferred);
  }
}

TEST_CASE("substitution avoids capturing case binders") {
  // (case s 0 (r -> r.len + free)) with free := r.len would capture r.
  Expr body = Expr::add(Expr::get(Expr::var("r"), "len"), Expr::var("free"));
  Expr e = Expr::option_case(Expr::var("s"), Expr::lit_int(0), "r", body);
  Expr replaced = substitute(e, {{"free", Expr::get(Expr::var("r"), "len")}});
  SortEnv env{{"s", route_sort()}, {"r", route_record()}};
  CHECK(sort_check(replaced, env) == Sort::integer());
  // The free occurrence survives: substituting r afterwards changes it.
  auto fv = replaced.free_vars();
  CHECK(fv.count("r") == 1);
  CHECK(fv.count("s") == 1);
}

TEST_CASE("value rendering is stable") {
  CHECK(mk_route(100, 2, false).render() == "<100,2,false>");
  CHECK(null_route().render() == "~");
  CHECK(Value::string_set({"b", "a"}).render() == "{a,b}");
}

TEST_CASE("merge law check accepts the cloud-provider merge") {
  NetworkInstance n;
  n.topo.nodes = {"w"};
  n.route_sort = route_sort();
  n.init["w"] = Expr::lit(mk_route(100, 0, false));
  n.merge = merge_expr();
  auto report = check_merge_laws(n, 1000, 42);
  CAPTURE(report.commutativity_violation.value_or(""), report.associativity_violation.value_or(""));
  CHECK(report.ok());
}

TEST_CASE("merge law check flags a left projection") {
  NetworkInstance n;
  n.topo.nodes = {"w"};
  n.route_sort = Sort::integer();
  n.init["w"] = Expr::lit_int(0);
  n.merge = Expr::var("s1");
  auto report = check_merge_laws(n, 50, 1);
  CHECK(report.commutativity_violation.has_value());
}

TEST_CASE("merge law check accepts min over ints") {
  NetworkInstance n;
  n.topo.nodes = {"w"};
  n.route_sort = Sort::integer();
  n.init["w"] = Expr::lit_int(0);
  n.merge = Expr::min(Expr::var("s1"), Expr::var("s2"));
  auto report = check_merge_laws(n, 500, 3);
  CHECK(report.ok());
}

TEST_CASE("validate_network reports unknown nodes and sort mismatches") {
  NetworkInstance n;
  n.topo.nodes = {"a", "b"};
  n.topo.edges = {{"a", "b"}, {"a", "z"}};
  n.route_sort = Sort::integer();
  n.init["a"] = Expr::lit_int(0);
  n.init["b"] = Expr::lit_int(0);
  n.transfer[{"a", "b"}] = Expr::lit_bool(true);  // wrong sort
  n.transfer[{"a", "z"}] = Expr::var("s");
  n.merge = Expr::min(Expr::var("s1"), Expr::var("s2"));
  auto diags = validate_network(n);
  bool unknown = false, sort_diag = false;
  for (const auto& d : diags) {
    if (d.code == "UnknownNode" && d.where == "z") unknown = true;
    if (d.code == "SortDiagnostic" && d.where == "a->b") sort_diag = true;
  }
  CHECK(unknown);
  CHECK(sort_diag);
}

TEST_CASE("validate_network accepts a well-formed network") {
  NetworkInstance n;
  n.topo.nodes = {"a", "b"};
  n.topo.edges = {{"a", "b"}};
  n.route_sort = Sort::integer();
  n.init["a"] = Expr::lit_int(0);
  n.init["b"] = Expr::lit_int(7);
  n.transfer[{"a", "b"}] = Expr::add(Expr::var("s"), Expr::lit_int(1));
  n.merge = Expr::min(Expr::var("s1"), Expr::var("s2"));
  CHECK(validate_network(n).empty());
}

TEST_CASE("preds are sorted and deduplicated") {
  Topology topo;
  topo.nodes = {"c", "b", "a"};
  topo.edges = {{"c", "a"}, {"b", "a"}};
  auto preds = topo.preds("a");
  REQUIRE(preds.size() == 2);
  CHECK(preds[0] == "b");
  CHECK(preds[1] == "c");
}
