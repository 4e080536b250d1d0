#include <catch2/catch_amalgamated.hpp>

#include "lockstep/benchmarks.hpp"
#include "lockstep/simulate.hpp"

using namespace lockstep;

namespace {

// Three nodes in a line with a hop-count policy.
NetworkInstance line3() {
  NetworkInstance n;
  n.topo.nodes = {"a", "b", "c"};
  n.topo.edges = {{"a", "b"}, {"b", "c"}};
  n.route_sort = Sort::option(Sort::record({{"len", Sort::integer()}}));
  Sort rec = Sort::record({{"len", Sort::integer()}});
  n.init["a"] = Expr::some(Expr::record_make({"len"}, {Expr::lit_int(0)}));
  n.init["b"] = Expr::none(rec);
  n.init["c"] = Expr::none(rec);
  Expr bump = Expr::option_case(
      Expr::var("s"), Expr::none(rec), "r",
      Expr::some(Expr::with(Expr::var("r"), "len", Expr::add(Expr::get(Expr::var("r"), "len"),
                                                             Expr::lit_int(1)))));
  n.transfer[{"a", "b"}] = bump;
  n.transfer[{"b", "c"}] = bump;
  Expr better = Expr::leq(Expr::get(Expr::var("r1"), "len"), Expr::get(Expr::var("r2"), "len"));
  n.merge = Expr::option_case(
      Expr::var("s1"), Expr::var("s2"), "r1",
      Expr::option_case(Expr::var("s2"), Expr::var("s1"), "r2",
                        Expr::if_(better, Expr::var("s1"), Expr::var("s2"))));
  return n;
}

}  // namespace

TEST_CASE("running example stabilizes at time 3 with the expected routes") {
  NetworkInstance net = cloud::network();
  SimulationTrace trace = simulate(net, 10);
  REQUIRE(trace.converged_at.has_value());
  CHECK(*trace.converged_at == 3);
  CHECK(trace.at("n", 3) == cloud::null_route());
  CHECK(trace.at("w", 3) == cloud::route(100, 0, false));
  CHECK(trace.at("v", 1) == cloud::route(100, 1, true));
  CHECK(trace.at("v", 3) == cloud::route(100, 1, true));
  CHECK(trace.at("d", 2) == cloud::route(100, 2, true));
  CHECK(trace.at("e", 2) == cloud::null_route());
  CHECK(trace.at("e", 3) == cloud::route(100, 3, true));
}

TEST_CASE("running example table is byte-stable") {
  NetworkInstance net = cloud::network();
  std::string table = simulate(net, 10).render_table();
  const char* expected =
      "time  n  w              v             d             e\n"
      "0     ~  <100,0,false>  ~             ~             ~\n"
      "1     ~  <100,0,false>  <100,1,true>  ~             ~\n"
      "2     ~  <100,0,false>  <100,1,true>  <100,2,true>  ~\n"
      "3     ~  <100,0,false>  <100,1,true>  <100,2,true>  <100,3,true>\n"
      "4     ~  <100,0,false>  <100,1,true>  <100,2,true>  <100,3,true>\n";
  CHECK(table == expected);
}

TEST_CASE("single node with no edges converges immediately") {
  NetworkInstance n;
  n.topo.nodes = {"a"};
  n.route_sort = Sort::integer();
  n.init["a"] = Expr::lit_int(7);
  n.merge = Expr::min(Expr::var("s1"), Expr::var("s2"));
  SimulationTrace trace = simulate(n, 5);
  REQUIRE(trace.converged_at.has_value());
  CHECK(*trace.converged_at == 0);
  CHECK(trace.recorded_steps() == 1);
  CHECK(trace.at("a", 0) == Value::integer(7));
}

TEST_CASE("hop-count line: distance-2 node first hears at t=2") {
  SimulationTrace trace = simulate(line3(), 10);
  REQUIRE(trace.converged_at.has_value());
  CHECK(*trace.converged_at == 2);
  Sort rec = Sort::record({{"len", Sort::integer()}});
  CHECK(trace.at("c", 0) == Value::none(Sort::option(rec)));
  CHECK(trace.at("c", 1) == Value::none(Sort::option(rec)));
  CHECK(trace.at("c", 2) == Value::some(Value::record(rec, {Value::integer(2)})));
}

TEST_CASE("simulation requires a closed network") {
  NetworkInstance n = cloud::network();
  n.symbolics.push_back({"x", Sort::integer(), {}});
  CHECK_THROWS_AS(simulate(n, 5), NotClosed);
  NetworkInstance m = cloud::network();
  m.init["n"] = Expr::var("free");
  CHECK_THROWS_AS(simulate(m, 5), NotClosed);
}

TEST_CASE("recomputing each step independently matches the recorded trace") {
  NetworkInstance net = cloud::network();
  SimulationTrace trace = simulate(net, 10);
  int last = trace.recorded_steps() - 1;
  for (int t = 0; t < last; ++t) {
    std::map<std::string, Value> current, expected_next;
    for (const auto& v : trace.nodes) {
      current[v] = trace.at(v, t);
      expected_next[v] = trace.at(v, t + 1);
    }
    CHECK(simulate_step(net, current) == expected_next);
  }
  // The converged state is a fixed point.
  std::map<std::string, Value> final_state;
  for (const auto& v : trace.nodes) final_state[v] = trace.at(v, last);
  CHECK(simulate_step(net, final_state) == final_state);
}

TEST_CASE("delay zero reproduces the synchronous run exactly") {
  NetworkInstance net = cloud::network();
  SimulationTrace sync = simulate(net, 8);
  for (std::uint64_t seed : {1ull, 99ull, 4242ull}) {
    SimulationTrace delayed = delayed_simulate(net, 0, seed, 8);
    for (const auto& v : sync.nodes)
      for (int t = 0; t < sync.recorded_steps(); ++t) CHECK(delayed.at(v, t) == sync.at(v, t));
  }
}

TEST_CASE("delay-1 runs still deliver the internal route to e") {
  NetworkInstance net = cloud::network();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SimulationTrace trace = delayed_simulate(net, 1, seed, 8);
    CHECK(trace.at("e", 7) == cloud::route(100, 3, true));
  }
}

TEST_CASE("exhaustive delay-1 schedules on the running example reach e by t=6") {
  // Reachable-set exploration of every per-edge window choice.
  NetworkInstance net = cloud::network();
  auto edges = net.topo.edges;
  using State = std::map<std::string, Value>;
  State init;
  for (const auto& v : net.topo.nodes) init[v] = eval_expr(net.init.at(v), {});

  // Configurations are (previous state, current state) pairs.
  std::vector<std::pair<State, State>> frontier{{init, init}};
  int horizon = 6;
  for (int t = 0; t < horizon; ++t) {
    std::vector<std::pair<State, State>> next_frontier;
    std::set<std::string> seen;
    for (const auto& [prev, cur] : frontier) {
      // Each edge independently picks the sender's state from {prev, cur};
      // at t=0 both coincide so one choice suffices.
      int choices = 1 << edges.size();
      for (int mask = 0; mask < choices; ++mask) {
        State next;
        for (const auto& v : net.topo.nodes) {
          Value acc = eval_expr(net.init.at(v), {});
          for (const auto& u : net.topo.preds(v)) {
            size_t ei = 0;
            for (; ei < edges.size(); ++ei)
              if (edges[ei].first == u && edges[ei].second == v) break;
            const State& pick = (mask >> ei) & 1 ? cur : prev;
            ValueEnv env{{"s", pick.at(u)}};
            acc = net.merge_values(acc, eval_expr(net.transfer_for(u, v), env));
          }
          next[v] = acc;
        }
        std::string key;
        for (const auto& [node, val] : cur) key += val.render() + "|";
        for (const auto& [node, val] : next) key += val.render() + "|";
        if (seen.insert(key).second) next_frontier.push_back({cur, next});
      }
    }
    frontier = std::move(next_frontier);
  }
  REQUIRE(!frontier.empty());
  for (const auto& [prev, cur] : frontier) CHECK(cur.at("e") == cloud::route(100, 3, true));
}

TEST_CASE("delay-1 on a two-node network lags at most one step") {
  // A counter network whose states change every step, so stale reads show.
  NetworkInstance n;
  n.topo.nodes = {"a", "b"};
  n.topo.edges = {{"a", "b"}, {"b", "a"}};
  n.route_sort = Sort::integer();
  n.init["a"] = Expr::lit_int(0);
  n.init["b"] = Expr::lit_int(0);
  n.transfer[{"a", "b"}] = Expr::add(Expr::var("s"), Expr::lit_int(1));
  n.transfer[{"b", "a"}] = Expr::add(Expr::var("s"), Expr::lit_int(1));
  n.merge = Expr::max(Expr::var("s1"), Expr::var("s2"));

  // Synchronously b counts 0,1,2,... With one unit of delay the step-1 window
  // is {a(0), a(1)}, so b(2) is either the synchronous value or one behind.
  SimulationTrace sync = simulate(n, 6);
  bool saw_lag = false, saw_prompt = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SimulationTrace trace = delayed_simulate(n, 1, seed, 6);
    for (int t = 1; t <= 6; ++t)
      CHECK(trace.at("b", t).as_int() <= sync.at("b", t).as_int());
    long long b2 = trace.at("b", 2).as_int();
    CHECK((b2 == sync.at("b", 2).as_int() || b2 == sync.at("b", 1).as_int()));
    if (b2 == sync.at("b", 2).as_int()) saw_prompt = true;
    if (b2 == sync.at("b", 1).as_int()) saw_lag = true;
  }
  CHECK(saw_prompt);
  CHECK(saw_lag);
}

TEST_CASE("singleton interface collapses repeated states into until segments") {
  NetworkInstance net = cloud::network();
  SimulationTrace trace = simulate(net, 10);
  Annotation a = singleton_interface(trace);

  // e: null until 3, then exactly the converged route
  TemporalOp e_op = a.at("e");
  REQUIRE(e_op.kind() == TemporalKind::Until);
  CHECK(e_op.tau() == 3);
  CHECK(e_op.pred().print() == Expr::eq(Expr::var("s"), Expr::lit(cloud::null_route())).print());
  REQUIRE(e_op.kids()[0].kind() == TemporalKind::Globally);
  CHECK(e_op.kids()[0].pred().print() ==
        Expr::eq(Expr::var("s"), Expr::lit(cloud::route(100, 3, true))).print());

  // v: null until 1, then its converged route
  TemporalOp v_op = a.at("v");
  REQUIRE(v_op.kind() == TemporalKind::Until);
  CHECK(v_op.tau() == 1);

  // w: constant from time 0
  CHECK(a.at("w").kind() == TemporalKind::Globally);

  // Pointwise: the interface holds exactly the trace values.
  for (const auto& v : trace.nodes)
    for (int t = 0; t < trace.recorded_steps(); ++t) {
      ValueEnv env{{"s", trace.at(v, t)}};
      CHECK(eval_expr(apply_at(a.at(v), t), env).as_bool());
    }
}

TEST_CASE("singleton interface requires convergence") {
  // A two-node cycle that oscillates: merge picks the other node's parity.
  NetworkInstance n;
  n.topo.nodes = {"a", "b"};
  n.topo.edges = {{"a", "b"}, {"b", "a"}};
  n.route_sort = Sort::integer();
  n.init["a"] = Expr::lit_int(0);
  n.init["b"] = Expr::lit_int(1);
  n.transfer[{"a", "b"}] = Expr::add(Expr::var("s"), Expr::lit_int(1));
  n.transfer[{"b", "a"}] = Expr::add(Expr::var("s"), Expr::lit_int(1));
  n.merge = Expr::max(Expr::var("s1"), Expr::var("s2"));
  SimulationTrace trace = simulate(n, 6);
  CHECK(!trace.converged_at.has_value());
  CHECK_THROWS_AS(singleton_interface(trace), NotConverged);
}
