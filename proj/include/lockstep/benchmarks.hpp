#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lockstep/simulate.hpp"

namespace lockstep {

struct BenchmarkFixture {
  std::string name;
  NetworkInstance net;
  Annotation interfaces;
  Annotation properties;
  bool expected_pass = true;
};

// ---------------------------------------------------------------------------
// The five-node cloud-provider example: WAN nodes w,v, data center d,e, and
// an external neighbor n. Policies: nv drops everything, wv tags routes as
// internal, de admits only tagged routes.
// ---------------------------------------------------------------------------

namespace cloud {

inline Sort route_record(bool with_fromw = false) {
  std::vector<std::pair<std::string, Sort>> fields{
      {"lp", Sort::bitvec(32)}, {"len", Sort::integer()}, {"tag", Sort::boolean()}};
  if (with_fromw) fields.emplace_back("fromw", Sort::boolean());
  return Sort::record(fields);
}

inline Sort route_sort(bool with_fromw = false) { return Sort::option(route_record(with_fromw)); }

inline Value route(std::uint64_t lp, long long len, bool tag) {
  return Value::some(Value::record(
      route_record(), {Value::bitvec(32, lp), Value::integer(len), Value::boolean(tag)}));
}

inline Value route_ghost(std::uint64_t lp, long long len, bool tag, bool fromw) {
  return Value::some(Value::record(route_record(true), {Value::bitvec(32, lp), Value::integer(len),
                                                        Value::boolean(tag), Value::boolean(fromw)}));
}

inline Value null_route(bool with_fromw = false) { return Value::none(route_sort(with_fromw)); }

// Higher local preference wins; shorter path breaks ties; absence loses.
inline Expr merge_expr() {
  Expr r1 = Expr::var("r1");
  Expr r2 = Expr::var("r2");
  Expr better = Expr::or_(
      {Expr::lt(Expr::get(r2, "lp"), Expr::get(r1, "lp")),
       Expr::and_({Expr::eq(Expr::get(r1, "lp"), Expr::get(r2, "lp")),
                   Expr::leq(Expr::get(r1, "len"), Expr::get(r2, "len"))})});
  return Expr::option_case(
      Expr::var("s1"), Expr::var("s2"), "r1",
      Expr::option_case(Expr::var("s2"), Expr::var("s1"), "r2",
                        Expr::if_(better, Expr::var("s1"), Expr::var("s2"))));
}

inline Expr bump_len(const Expr& r) {
  return Expr::with(r, "len", Expr::add(Expr::get(r, "len"), Expr::lit_int(1)));
}

inline NetworkInstance network(bool with_fromw = false) {
  NetworkInstance n;
  n.topo.nodes = {"n", "w", "v", "d", "e"};
  n.topo.edges = {{"n", "v"}, {"w", "v"}, {"v", "d"}, {"d", "v"}, {"d", "e"}};
  n.route_sort = route_sort(with_fromw);

  n.init["w"] = Expr::lit(with_fromw ? route_ghost(100, 0, false, true) : route(100, 0, false));
  for (const auto* id : {"n", "v", "d", "e"}) n.init[id] = Expr::lit(null_route(with_fromw));

  Expr r = Expr::var("r");
  auto pass = [&](Expr body) {
    return Expr::option_case(Expr::var("s"), Expr::lit(null_route(with_fromw)), "r", Expr::some(body));
  };
  // wv: increment length, apply the default preference, tag internal.
  n.transfer[{"w", "v"}] = pass(Expr::with(
      Expr::with(bump_len(r), "lp", Expr::lit(Value::bitvec(32, 100))), "tag", Expr::lit_bool(true)));
  // nv: external filter drops all routes.
  n.transfer[{"n", "v"}] = Expr::lit(null_route(with_fromw));
  n.transfer[{"v", "d"}] = pass(bump_len(r));
  n.transfer[{"d", "v"}] = pass(bump_len(r));
  // de: admit internal routes only.
  n.transfer[{"d", "e"}] = Expr::option_case(
      Expr::var("s"), Expr::lit(null_route(with_fromw)), "r",
      Expr::if_(Expr::get(r, "tag"), Expr::some(bump_len(r)), Expr::lit(null_route(with_fromw))));

  n.merge = merge_expr();
  return n;
}

inline Expr s_var() { return Expr::var("s"); }
inline Expr pred_true() { return Expr::lit_bool(true); }
inline Expr is_null(bool ghost = false) { return Expr::eq(s_var(), Expr::lit(null_route(ghost))); }
inline Expr non_null(bool ghost = false) { return Expr::neq(s_var(), Expr::lit(null_route(ghost))); }

// Predicates over the route payload are false on the null route.
inline Expr on_route(Expr body) {
  return Expr::option_case(s_var(), Expr::lit_bool(false), "r", std::move(body));
}
inline Expr lp_is(std::uint64_t lp) {
  return on_route(Expr::eq(Expr::get(Expr::var("r"), "lp"), Expr::lit(Value::bitvec(32, lp))));
}
inline Expr tagged() { return on_route(Expr::get(Expr::var("r"), "tag")); }
inline Expr from_w() { return on_route(Expr::get(Expr::var("r"), "fromw")); }
inline Expr null_or(Expr body) {
  return Expr::option_case(s_var(), Expr::lit_bool(true), "r", std::move(body));
}

inline Annotation trivial(const Topology& topo) {
  Annotation a;
  for (const auto& v : topo.nodes) a[v] = TemporalOp::globally(pred_true());
  return a;
}

inline std::vector<BenchmarkFixture> running_example_fixtures() {
  std::vector<BenchmarkFixture> out;
  NetworkInstance base = network();
  NetworkInstance ghost = network(true);

  {
    BenchmarkFixture f;
    f.name = "base";
    f.net = base;
    f.interfaces = trivial(base.topo);
    f.properties = f.interfaces;
    out.push_back(std::move(f));
  }
  {
    // Weak tag invariants: if e has a route, it is tagged.
    BenchmarkFixture f;
    f.name = "weak-tag";
    f.net = base;
    f.interfaces["n"] = TemporalOp::globally(pred_true());
    f.interfaces["w"] = TemporalOp::globally(lp_is(100));
    for (const auto* id : {"v", "d", "e"})
      f.interfaces[id] = TemporalOp::globally(null_or(Expr::get(Expr::var("r"), "tag")));
    f.properties = f.interfaces;
    out.push_back(std::move(f));
  }
  {
    // Timed reachability invariants: e holds a route from time 3 onward.
    BenchmarkFixture f;
    f.name = "reach";
    f.net = base;
    f.interfaces["n"] = TemporalOp::globally(pred_true());
    f.interfaces["w"] = TemporalOp::globally(lp_is(100));
    f.interfaces["v"] = TemporalOp::until(is_null(), 1, TemporalOp::globally(tagged()));
    f.interfaces["d"] = TemporalOp::until(is_null(), 2, TemporalOp::globally(tagged()));
    f.interfaces["e"] = TemporalOp::finally(3, TemporalOp::globally(non_null()));
    f.properties = trivial(base.topo);
    f.properties["e"] = TemporalOp::finally(3, TemporalOp::globally(non_null()));
    out.push_back(std::move(f));
  }
  {
    // The circular stable-state interfaces: spurious lp-200 routes at v and d
    // justify concluding that e never hears from w.
    BenchmarkFixture f;
    f.name = "bad-strawperson";
    f.net = base;
    f.interfaces["n"] = TemporalOp::globally(pred_true());
    f.interfaces["w"] = TemporalOp::globally(lp_is(100));
    Expr spurious = on_route(
        Expr::and_({Expr::eq(Expr::get(Expr::var("r"), "lp"), Expr::lit(Value::bitvec(32, 200))),
                    Expr::not_(Expr::get(Expr::var("r"), "tag"))}));
    f.interfaces["v"] = TemporalOp::globally(spurious);
    f.interfaces["d"] = TemporalOp::globally(spurious);
    f.interfaces["e"] = TemporalOp::globally(is_null());
    f.properties = trivial(base.topo);
    f.expected_pass = true;  // passes the (unsound) stable-state check
    out.push_back(std::move(f));
  }
  {
    // The same interfaces under the timed semantics: rejected at t=0.
    BenchmarkFixture f = out.back();
    f.name = "bad-temporal";
    f.expected_pass = false;
    out.push_back(std::move(f));
  }
  {
    // Patching in the null route just moves the failure to t=1.
    BenchmarkFixture f = out.back();
    f.name = "bad-temporal-patched";
    Expr spurious_or_null = Expr::or_(
        {on_route(Expr::and_(
             {Expr::eq(Expr::get(Expr::var("r"), "lp"), Expr::lit(Value::bitvec(32, 200))),
              Expr::not_(Expr::get(Expr::var("r"), "tag"))})),
         is_null()});
    f.interfaces["v"] = TemporalOp::globally(spurious_or_null);
    f.interfaces["d"] = TemporalOp::globally(spurious_or_null);
    f.expected_pass = false;
    out.push_back(std::move(f));
  }
  {
    // Ghost origin bit: e provably hears from w and nobody else.
    BenchmarkFixture f;
    f.name = "ghost-fromw";
    f.net = ghost;
    f.interfaces["n"] =
        TemporalOp::globally(null_or(Expr::not_(Expr::get(Expr::var("r"), "fromw"))));
    f.interfaces["w"] = TemporalOp::globally(on_route(
        Expr::and_({Expr::eq(Expr::get(Expr::var("r"), "lp"), Expr::lit(Value::bitvec(32, 100))),
                    Expr::get(Expr::var("r"), "fromw")})));
    Expr tag_and_fromw =
        on_route(Expr::and_({Expr::get(Expr::var("r"), "tag"), Expr::get(Expr::var("r"), "fromw")}));
    f.interfaces["v"] = TemporalOp::until(Expr::eq(s_var(), Expr::lit(null_route(true))), 1,
                                          TemporalOp::globally(tag_and_fromw));
    f.interfaces["d"] = TemporalOp::until(Expr::eq(s_var(), Expr::lit(null_route(true))), 2,
                                          TemporalOp::globally(tag_and_fromw));
    f.interfaces["e"] = TemporalOp::finally(3, TemporalOp::globally(from_w()));
    f.properties = trivial(ghost.topo);
    f.properties["e"] = TemporalOp::finally(3, TemporalOp::globally(from_w()));
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace cloud

// ---------------------------------------------------------------------------
// Fattree data centers: k pods, (k/2)^2 cores, k/2 aggregation and k/2 edge
// switches per pod. Aggregation j in every pod connects to core block j.
// ---------------------------------------------------------------------------

enum class FattreeRole { Core, Aggregation, Edge };

struct FattreeLayout {
  int k = 0;
  struct NodeInfo {
    std::string id;
    FattreeRole role;
    int pod;  // -1 for cores
  };
  std::vector<NodeInfo> nodes;
  Topology topo;
  std::map<std::string, NodeInfo> info;

  std::vector<std::string> edge_nodes() const {
    std::vector<std::string> out;
    for (const auto& n : nodes)
      if (n.role == FattreeRole::Edge) out.push_back(n.id);
    return out;
  }
  std::vector<std::string> core_nodes() const {
    std::vector<std::string> out;
    for (const auto& n : nodes)
      if (n.role == FattreeRole::Core) out.push_back(n.id);
    return out;
  }
};

inline FattreeLayout fattree(int k) {
  if (k < 2 || k % 2 != 0) throw Error("fattree pod count must be even and >= 2");
  FattreeLayout layout;
  layout.k = k;
  int half = k / 2;
  int num_cores = half * half;

  for (int c = 0; c < num_cores; ++c)
    layout.nodes.push_back({"c" + std::to_string(c), FattreeRole::Core, -1});
  for (int p = 0; p < k; ++p) {
    int base = num_cores + p * k;
    for (int j = 0; j < half; ++j)
      layout.nodes.push_back({"a" + std::to_string(base + j), FattreeRole::Aggregation, p});
    for (int j = 0; j < half; ++j)
      layout.nodes.push_back({"e" + std::to_string(base + half + j), FattreeRole::Edge, p});
  }
  for (const auto& n : layout.nodes) {
    layout.topo.nodes.push_back(n.id);
    layout.info[n.id] = n;
  }

  auto both = [&](const std::string& a, const std::string& b) {
    layout.topo.edges.push_back({a, b});
    layout.topo.edges.push_back({b, a});
  };
  for (int p = 0; p < k; ++p) {
    int base = num_cores + p * k;
    for (int j = 0; j < half; ++j) {
      std::string agg = "a" + std::to_string(base + j);
      for (int i = 0; i < half; ++i) both(agg, "e" + std::to_string(base + half + i));
      for (int c = j * half; c < (j + 1) * half; ++c) both(agg, "c" + std::to_string(c));
    }
  }
  return layout;
}

// Hops from the destination edge node, by role: the destination itself (0),
// aggregation in its pod (1), cores and edge nodes in its pod (2),
// aggregation elsewhere (3), edge nodes elsewhere (4).
inline int fattree_distance(const FattreeLayout& layout, const std::string& dest, const std::string& v) {
  const auto& d = layout.info.at(dest);
  if (d.role != FattreeRole::Edge) throw Error("destination must be an edge node");
  if (v == dest) return 0;
  const auto& i = layout.info.at(v);
  switch (i.role) {
    case FattreeRole::Aggregation: return i.pod == d.pod ? 1 : 3;
    case FattreeRole::Core: return 2;
    case FattreeRole::Edge: return i.pod == d.pod ? 2 : 4;
  }
  throw Error("unreachable");
}

namespace fat {

constexpr const char* kDownTag = "D";

inline Sort route_record(bool with_hijack_tag) {
  std::vector<std::pair<std::string, Sort>> fields{
      {"prefix", Sort::bitvec(32)},
      {"ad", Sort::bitvec(32)},
      {"lp", Sort::bitvec(32)},
      {"med", Sort::bitvec(32)},
      {"origin", Sort::enumeration({"egp", "igp", "unknown"})},
      {"len", Sort::integer()},
      {"comms", Sort::string_set()}};
  if (with_hijack_tag) fields.emplace_back("tag", Sort::boolean());
  return Sort::record(fields);
}

inline Expr origin_egp() {
  return Expr::lit(Value::enum_label(Sort::enumeration({"egp", "igp", "unknown"}), "egp"));
}

// The destination's self-route; the prefix argument may be symbolic.
inline Expr self_route(const Expr& prefix, bool with_hijack_tag) {
  std::vector<std::string> names{"prefix", "ad", "lp", "med", "origin", "len", "comms"};
  std::vector<Expr> values{prefix,
                           Expr::lit(Value::bitvec(32, 20)),
                           Expr::lit(Value::bitvec(32, 100)),
                           Expr::lit(Value::bitvec(32, 0)),
                           origin_egp(),
                           Expr::lit_int(0),
                           Expr::lit(Value::string_set({}))};
  if (with_hijack_tag) {
    names.push_back("tag");
    values.push_back(Expr::lit_bool(false));
  }
  return Expr::some(Expr::record_make(names, values));
}

inline Expr null_route(bool with_hijack_tag) {
  return Expr::none(route_record(with_hijack_tag));
}

inline Expr bump(const Expr& r) {
  return Expr::with(r, "len", Expr::add(Expr::get(r, "len"), Expr::lit_int(1)));
}

inline Expr pass_bump(bool tagged) {
  return Expr::option_case(Expr::var("s"), null_route(tagged), "r", Expr::some(bump(Expr::var("r"))));
}

// Non-null first, then higher local preference, then shorter path. When a
// preferred prefix is supplied (the hijack policy), routes for it outrank
// everything else.
inline Expr merge_expr(const std::optional<Expr>& preferred_prefix) {
  Expr r1 = Expr::var("r1");
  Expr r2 = Expr::var("r2");
  Expr better = Expr::or_(
      {Expr::lt(Expr::get(r2, "lp"), Expr::get(r1, "lp")),
       Expr::and_({Expr::eq(Expr::get(r1, "lp"), Expr::get(r2, "lp")),
                   Expr::leq(Expr::get(r1, "len"), Expr::get(r2, "len"))})});
  if (preferred_prefix) {
    Expr p1 = Expr::eq(Expr::get(r1, "prefix"), *preferred_prefix);
    Expr p2 = Expr::eq(Expr::get(r2, "prefix"), *preferred_prefix);
    better = Expr::if_(Expr::and_({p1, Expr::not_(p2)}), Expr::lit_bool(true),
                       Expr::if_(Expr::and_({p2, Expr::not_(p1)}), Expr::lit_bool(false), better));
  }
  return Expr::option_case(
      Expr::var("s1"), Expr::var("s2"), "r1",
      Expr::option_case(Expr::var("s2"), Expr::var("s1"), "r2",
                        Expr::if_(better, Expr::var("s1"), Expr::var("s2"))));
}

struct DestSpec {
  std::optional<std::string> concrete;  // nullopt: symbolic over edge nodes
};

struct FattreeBench {
  FattreeLayout layout;
  Sort record;
  Sort route_sort;
  std::optional<Sort> dest_sort;  // enum over edge nodes when symbolic

  Expr s_pred(Expr body) const {  // predicate on the payload; false on null
    return Expr::option_case(Expr::var("s"), Expr::lit_bool(false), "r", std::move(body));
  }
  Expr non_null() const { return Expr::neq(Expr::var("s"), Expr::none(record)); }
  Expr is_null() const { return Expr::eq(Expr::var("s"), Expr::none(record)); }

  // dest == id, as a concrete truth value or a predicate over the symbolic.
  Expr dest_is(const DestSpec& dest, const std::string& id) const {
    if (dest.concrete) return Expr::lit_bool(*dest.concrete == id);
    return Expr::eq(Expr::var("dest"), Expr::lit(Value::enum_label(*dest_sort, id)));
  }

  // Distances this node can have from any edge destination.
  std::vector<int> possible_distances(const std::string& v) const {
    switch (layout.info.at(v).role) {
      case FattreeRole::Core: return {2};
      case FattreeRole::Aggregation: return {1, 3};
      case FattreeRole::Edge: return {0, 2, 4};
    }
    throw Error("unreachable");
  }

  Expr distance_guard(const DestSpec& dest, const std::string& v, int delta) const {
    std::vector<Expr> cases;
    for (const auto& d : layout.edge_nodes())
      if (fattree_distance(layout, d, v) == delta) cases.push_back(dest_is(dest, d));
    if (cases.empty()) return Expr::lit_bool(false);
    return Expr::or_(std::move(cases));
  }

  // adjacent(v): the destination itself plus aggregation nodes in its pod.
  Expr adjacent(const DestSpec& dest, const std::string& v) const {
    const auto& i = layout.info.at(v);
    if (i.role == FattreeRole::Edge) return dest_is(dest, v);
    if (i.role == FattreeRole::Core) return Expr::lit_bool(false);
    std::vector<Expr> cases;
    for (const auto& d : layout.edge_nodes())
      if (layout.info.at(d).pod == i.pod) cases.push_back(dest_is(dest, d));
    return Expr::or_(std::move(cases));
  }

  // Combines per-distance branches into one operator. With a concrete
  // destination this selects the single branch; with a symbolic destination
  // each branch is guarded by `globally(dest lands at that distance)`.
  TemporalOp by_distance(const DestSpec& dest, const std::string& v,
                         const std::function<TemporalOp(int)>& branch) const {
    if (dest.concrete) return branch(fattree_distance(layout, *dest.concrete, v));
    TemporalOp acc;
    for (int delta : possible_distances(v)) {
      TemporalOp guarded =
          TemporalOp::and_op(TemporalOp::globally(distance_guard(dest, v, delta)), branch(delta));
      acc = acc.valid() ? TemporalOp::or_op(acc, guarded) : guarded;
    }
    return acc;
  }
};

inline FattreeBench make_bench(int k, const DestSpec& dest, bool with_hijack_tag) {
  FattreeBench b;
  b.layout = fattree(k);
  b.record = route_record(with_hijack_tag);
  b.route_sort = Sort::option(b.record);
  if (!dest.concrete) b.dest_sort = Sort::enumeration(b.layout.edge_nodes());
  if (dest.concrete && b.layout.info.at(*dest.concrete).role != FattreeRole::Edge)
    throw Error("destination must be an edge node");
  return b;
}

// Initial routes: the destination (or whichever edge node the symbolic
// destination selects) starts with a self-route; everyone else with nothing.
inline void set_init(NetworkInstance& n, const FattreeBench& b, const DestSpec& dest,
                     const Expr& prefix, bool tag) {
  for (const auto& node : b.layout.nodes) {
    if (node.role != FattreeRole::Edge) {
      n.init[node.id] = null_route(tag);
      continue;
    }
    if (dest.concrete) {
      n.init[node.id] =
          node.id == *dest.concrete ? self_route(prefix, tag) : null_route(tag);
    } else {
      n.init[node.id] =
          Expr::if_(b.dest_is(dest, node.id), self_route(prefix, tag), null_route(tag));
    }
  }
}

inline BenchmarkFixture build_reach(int k, const DestSpec& dest) {
  FattreeBench b = make_bench(k, dest, false);
  BenchmarkFixture f;
  f.name = dest.concrete ? "reach" : "reach-all";
  f.net.topo = b.layout.topo;
  f.net.route_sort = b.route_sort;
  f.net.extra_alphabet = {kDownTag};
  if (!dest.concrete) f.net.symbolics.push_back({"dest", *b.dest_sort, {}});
  set_init(f.net, b, dest, Expr::lit(Value::bitvec(32, 1)), false);
  for (const auto& e : b.layout.topo.edges) f.net.transfer[e] = pass_bump(false);
  f.net.merge = merge_expr({});

  for (const auto& node : b.layout.topo.nodes) {
    f.interfaces[node] = b.by_distance(dest, node, [&](int delta) {
      return TemporalOp::finally(delta, TemporalOp::globally(b.non_null()));
    });
    f.properties[node] = TemporalOp::finally(4, TemporalOp::globally(b.non_null()));
  }
  return f;
}

inline BenchmarkFixture build_length(int k, const DestSpec& dest) {
  FattreeBench b = make_bench(k, dest, false);
  BenchmarkFixture f = build_reach(k, dest);
  f.name = dest.concrete ? "length" : "length-all";

  Expr lp_default = b.s_pred(
      Expr::eq(Expr::get(Expr::var("r"), "lp"), Expr::lit(Value::bitvec(32, 100))));
  for (const auto& node : b.layout.topo.nodes) {
    TemporalOp eventually = b.by_distance(dest, node, [&](int delta) {
      Expr len_le = b.s_pred(Expr::leq(Expr::get(Expr::var("r"), "len"), Expr::lit_int(delta)));
      return TemporalOp::finally(delta, TemporalOp::globally(len_le));
    });
    // "no better routes appear" and "eventually the route appears"
    f.interfaces[node] = TemporalOp::and_op(
        TemporalOp::globally(Expr::or_({b.is_null(), lp_default})), eventually);
    f.properties[node] = TemporalOp::finally(
        4, TemporalOp::globally(
               b.s_pred(Expr::leq(Expr::get(Expr::var("r"), "len"), Expr::lit_int(4)))));
  }
  return f;
}

inline BenchmarkFixture build_vf(int k, const DestSpec& dest) {
  FattreeBench b = make_bench(k, dest, false);
  BenchmarkFixture f;
  f.name = dest.concrete ? "vf" : "vf-all";
  f.net.topo = b.layout.topo;
  f.net.route_sort = b.route_sort;
  if (!dest.concrete) f.net.symbolics.push_back({"dest", *b.dest_sort, {}});
  set_init(f.net, b, dest, Expr::lit(Value::bitvec(32, 1)), false);

  Expr r = Expr::var("r");
  Expr drop_down = Expr::option_case(
      Expr::var("s"), null_route(false), "r",
      Expr::if_(Expr::contains(Expr::get(r, "comms"), kDownTag), null_route(false),
                Expr::some(bump(r))));
  Expr add_down = Expr::option_case(
      Expr::var("s"), null_route(false), "r",
      Expr::some(Expr::with(bump(r), "comms", Expr::insert(Expr::get(r, "comms"), kDownTag))));
  for (const auto& [u, v] : b.layout.topo.edges) {
    FattreeRole from = b.layout.info.at(u).role;
    FattreeRole to = b.layout.info.at(v).role;
    bool down = (from == FattreeRole::Core && to == FattreeRole::Aggregation) ||
                (from == FattreeRole::Aggregation && to == FattreeRole::Edge);
    f.net.transfer[{u, v}] = down ? add_down : drop_down;
  }
  f.net.merge = merge_expr({});

  for (const auto& node : b.layout.topo.nodes) {
    f.interfaces[node] = b.by_distance(dest, node, [&](int delta) {
      Expr body = Expr::and_(
          {Expr::eq(Expr::get(r, "lp"), Expr::lit(Value::bitvec(32, 100))),
           Expr::eq(Expr::get(r, "len"), Expr::lit_int(delta)),
           Expr::implies(b.adjacent(dest, node),
                         Expr::not_(Expr::contains(Expr::get(r, "comms"), kDownTag)))});
      return TemporalOp::until(b.is_null(), delta, TemporalOp::globally(b.s_pred(body)));
    });
    f.properties[node] = TemporalOp::finally(4, TemporalOp::globally(b.non_null()));
  }
  return f;
}

// The hijack network adds an external node h peered with every core. Cores
// filter h's announcements for the internal prefix p; everything h sends is
// marked with the external ghost tag on import.
inline BenchmarkFixture build_hijack(int k, const DestSpec& dest, bool broken_filter = false) {
  FattreeBench b = make_bench(k, dest, true);
  BenchmarkFixture f;
  f.name = dest.concrete ? "hijack" : "hijack-all";
  f.net.topo = b.layout.topo;
  f.net.route_sort = b.route_sort;
  f.net.extra_alphabet = {kDownTag};
  f.net.topo.nodes.push_back("h");
  for (const auto& c : b.layout.core_nodes()) {
    f.net.topo.edges.push_back({"h", c});
    f.net.topo.edges.push_back({c, "h"});
  }

  Expr p = Expr::var("p");
  f.net.symbolics.push_back({"p", Sort::bitvec(32), {}});
  if (!dest.concrete) f.net.symbolics.push_back({"dest", *b.dest_sort, {}});
  set_init(f.net, b, dest, p, true);
  f.net.init["h"] = Expr::var("h0");
  f.net.symbolics.push_back({"h0", b.route_sort, {}});

  Expr r = Expr::var("r");
  for (const auto& e : b.layout.topo.edges) f.net.transfer[e] = pass_bump(true);
  Expr import_h = Expr::with(
      Expr::with(bump(r), "lp", Expr::lit(Value::bitvec(32, 100))), "tag", Expr::lit_bool(true));
  for (const auto& c : b.layout.core_nodes()) {
    Expr filtered = broken_filter
                        ? Expr::some(import_h)
                        : Expr::if_(Expr::eq(Expr::get(r, "prefix"), p), null_route(true),
                                    Expr::some(import_h));
    f.net.transfer[{"h", c}] = Expr::option_case(Expr::var("s"), null_route(true), "r", filtered);
    f.net.transfer[{c, "h"}] = pass_bump(true);
  }
  f.net.merge = merge_expr(p);

  Expr internal_route = b.s_pred(Expr::and_(
      {Expr::eq(Expr::get(r, "prefix"), p), Expr::not_(Expr::get(r, "tag"))}));
  Expr no_hijack = Expr::option_case(
      Expr::var("s"), Expr::lit_bool(true), "r",
      Expr::implies(Expr::eq(Expr::get(r, "prefix"), p), Expr::not_(Expr::get(r, "tag"))));
  for (const auto& node : b.layout.topo.nodes) {
    TemporalOp eventually = b.by_distance(dest, node, [&](int delta) {
      return TemporalOp::finally(delta, TemporalOp::globally(internal_route));
    });
    // "route will be internally reachable" and "no hijack route is ever used"
    f.interfaces[node] = TemporalOp::and_op(eventually, TemporalOp::globally(no_hijack));
    f.properties[node] = TemporalOp::finally(4, TemporalOp::globally(internal_route));
  }
  f.interfaces["h"] = TemporalOp::globally(Expr::lit_bool(true));
  f.properties["h"] = TemporalOp::globally(Expr::lit_bool(true));
  f.expected_pass = !broken_filter;
  return f;
}

}  // namespace fat

// ---------------------------------------------------------------------------
// Synthetic wide-area network: a ring of internal routers with arbitrary
// (symbolic) initial routes, external peers hanging off them, and export
// policies that keep the BTE community inside.
// ---------------------------------------------------------------------------

namespace wan {

constexpr const char* kBte = "BTE";

inline Sort route_record() {
  return Sort::record(
      {{"lp", Sort::bitvec(32)}, {"len", Sort::integer()}, {"tags", Sort::string_set()}});
}

inline BenchmarkFixture build_wan_bte(bool broken_export = false) {
  constexpr int kInternals = 10;
  constexpr int kExternals = 20;

  BenchmarkFixture f;
  f.name = broken_export ? "wan-bte-broken" : "wan-bte";
  Sort record = route_record();
  f.net.route_sort = Sort::option(record);
  f.net.extra_alphabet = {kBte};

  std::vector<std::string> internals, externals;
  for (int i = 0; i < kInternals; ++i) internals.push_back("i" + std::to_string(i));
  for (int x = 0; x < kExternals; ++x) externals.push_back("x" + std::to_string(x));
  f.net.topo.nodes = internals;
  f.net.topo.nodes.insert(f.net.topo.nodes.end(), externals.begin(), externals.end());

  auto both = [&](const std::string& a, const std::string& b) {
    f.net.topo.edges.push_back({a, b});
    f.net.topo.edges.push_back({b, a});
  };
  for (int i = 0; i < kInternals; ++i) both(internals[i], internals[(i + 1) % kInternals]);
  for (int x = 0; x < kExternals; ++x) both(externals[x], internals[x % kInternals]);

  // Internal routers start with any route at all; externals start empty.
  for (int i = 0; i < kInternals; ++i) {
    std::string sym = "r" + std::to_string(i);
    f.net.symbolics.push_back({sym, f.net.route_sort, {}});
    f.net.init[internals[i]] = Expr::var(sym);
  }
  for (const auto& x : externals) f.net.init[x] = Expr::none(record);

  Expr r = Expr::var("r");
  Expr pass = Expr::option_case(
      Expr::var("s"), Expr::none(record), "r",
      Expr::some(Expr::with(r, "len", Expr::add(Expr::get(r, "len"), Expr::lit_int(1)))));
  // Export policy: never announce BTE-tagged routes to an external peer.
  Expr export_filter = Expr::option_case(
      Expr::var("s"), Expr::none(record), "r",
      Expr::if_(Expr::contains(Expr::get(r, "tags"), kBte), Expr::none(record),
                Expr::some(Expr::with(r, "len", Expr::add(Expr::get(r, "len"), Expr::lit_int(1))))));
  for (const auto& [u, v] : f.net.topo.edges) {
    bool to_external = v[0] == 'x';
    bool use_filter = to_external && !(broken_export && v == "x0");
    f.net.transfer[{u, v}] = use_filter ? export_filter : pass;
  }

  Expr better = Expr::or_(
      {Expr::lt(Expr::get(Expr::var("r2"), "lp"), Expr::get(Expr::var("r1"), "lp")),
       Expr::and_({Expr::eq(Expr::get(Expr::var("r1"), "lp"), Expr::get(Expr::var("r2"), "lp")),
                   Expr::leq(Expr::get(Expr::var("r1"), "len"), Expr::get(Expr::var("r2"), "len"))})});
  f.net.merge = Expr::option_case(
      Expr::var("s1"), Expr::var("s2"), "r1",
      Expr::option_case(Expr::var("s2"), Expr::var("s1"), "r2",
                        Expr::if_(better, Expr::var("s1"), Expr::var("s2"))));

  // The interface is the property: externals never hold a BTE-tagged route.
  Expr no_bte = Expr::option_case(Expr::var("s"), Expr::lit_bool(true), "r",
                                  Expr::not_(Expr::contains(Expr::get(r, "tags"), kBte)));
  for (const auto& i : internals) f.interfaces[i] = TemporalOp::globally(Expr::lit_bool(true));
  for (const auto& x : externals) f.interfaces[x] = TemporalOp::globally(no_bte);
  f.properties = f.interfaces;
  f.expected_pass = !broken_export;
  return f;
}

}  // namespace wan

}  // namespace lockstep
