#pragma once

#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lockstep/temporal.hpp"

namespace lockstep {

// Synchronous execution record: states[v][t] is the route at v at time t.
struct SimulationTrace {
  std::vector<std::string> nodes;  // topology order
  std::map<std::string, std::vector<Value>> states;
  std::optional<int> converged_at;
  int horizon = 0;  // max_steps requested

  int recorded_steps() const { return static_cast<int>(states.begin()->second.size()); }

  const Value& at(const std::string& node, int t) const { return states.at(node)[static_cast<size_t>(t)]; }

  // Rendered time-by-node table. When the run converged we print one row past
  // the fixed point so the repeated state is visible, as a routing trace
  // normally shows it.
  std::string render_table() const {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"time"};
    header.insert(header.end(), nodes.begin(), nodes.end());
    rows.push_back(header);
    int last = recorded_steps() - 1;
    int shown = converged_at ? *converged_at + 1 : last;
    for (int t = 0; t <= shown; ++t) {
      std::vector<std::string> row{std::to_string(t)};
      for (const auto& v : nodes) row.push_back(at(v, std::min(t, last)).render());
      rows.push_back(row);
    }
    std::vector<size_t> widths(header.size(), 0);
    for (const auto& row : rows)
      for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    std::ostringstream out;
    for (const auto& row : rows) {
      std::ostringstream line;
      for (size_t i = 0; i < row.size(); ++i)
        line << (i ? "  " : "") << std::left << std::setw(static_cast<int>(widths[i])) << row[i];
      std::string text = line.str();
      text.erase(text.find_last_not_of(' ') + 1);
      out << text << "\n";
    }
    return out.str();
  }
};

namespace detail {

inline void require_closed(const NetworkInstance& n) {
  if (!n.symbolics.empty()) throw NotClosed("network declares symbolic variables");
  for (const auto& [node, e] : n.init)
    if (!e.free_vars().empty()) throw NotClosed("init at '" + node + "' references variables");
}

inline std::map<std::string, Value> initial_state(const NetworkInstance& n) {
  std::map<std::string, Value> state;
  for (const auto& id : n.topo.nodes) state[id] = eval_expr(n.init.at(id), {});
  return state;
}

inline Value transfer_value(const NetworkInstance& n, const std::string& u, const std::string& v,
                            const Value& route) {
  ValueEnv env{{"s", route}};
  return eval_expr(n.transfer_for(u, v), env);
}

}  // namespace detail

// One synchronous step from a full state vector: each node merges its initial
// route with the transferred predecessor states, in sorted predecessor order.
inline std::map<std::string, Value> simulate_step(const NetworkInstance& n,
                                                  const std::map<std::string, Value>& current) {
  std::map<std::string, Value> next;
  for (const auto& v : n.topo.nodes) {
    Value acc = eval_expr(n.init.at(v), {});
    for (const auto& u : n.topo.preds(v))
      acc = n.merge_values(acc, detail::transfer_value(n, u, v, current.at(u)));
    next[v] = std::move(acc);
  }
  return next;
}

// Runs the synchronous semantics until a global fixed point or max_steps.
// The trace records states up to and including the converged step.
inline SimulationTrace simulate(const NetworkInstance& n, int max_steps) {
  detail::require_closed(n);
  if (max_steps < 1) throw Error("simulate: max_steps must be >= 1");

  SimulationTrace trace;
  trace.nodes = n.topo.nodes;
  trace.horizon = max_steps;

  auto state = detail::initial_state(n);
  for (const auto& [node, value] : state) trace.states[node].push_back(value);

  for (int t = 0; t < max_steps; ++t) {
    auto next = simulate_step(n, state);
    if (next == state) {
      trace.converged_at = t;
      return trace;
    }
    for (const auto& [node, value] : next) trace.states[node].push_back(value);
    state = std::move(next);
  }
  return trace;
}

// Bounded-delay variant: the input along each edge at step t+1 is drawn from
// the sender's recorded states in [max(0, t-delay), t], chosen by a seeded
// schedule. delay=0 reproduces simulate exactly.
inline SimulationTrace delayed_simulate(const NetworkInstance& n, int delay, std::uint64_t schedule_seed,
                                        int max_steps) {
  detail::require_closed(n);
  if (delay < 0) throw Error("delayed_simulate: delay must be >= 0");
  if (max_steps < 1) throw Error("delayed_simulate: max_steps must be >= 1");

  SimulationTrace trace;
  trace.nodes = n.topo.nodes;
  trace.horizon = max_steps;

  std::mt19937_64 rng(schedule_seed);
  auto state = detail::initial_state(n);
  for (const auto& [node, value] : state) trace.states[node].push_back(value);

  auto edges = n.topo.edges;
  std::sort(edges.begin(), edges.end());

  for (int t = 0; t < max_steps; ++t) {
    // Pick each edge's send time within the window, oldest-first indexing.
    std::map<std::pair<std::string, std::string>, int> chosen;
    int lo = std::max(0, t - delay);
    for (const auto& e : edges) chosen[e] = lo + static_cast<int>(rng() % static_cast<unsigned>(t - lo + 1));

    std::map<std::string, Value> next;
    for (const auto& v : n.topo.nodes) {
      Value acc = eval_expr(n.init.at(v), {});
      for (const auto& u : n.topo.preds(v)) {
        const Value& sent = trace.states.at(u)[static_cast<size_t>(chosen.at({u, v}))];
        acc = n.merge_values(acc, detail::transfer_value(n, u, v, sent));
      }
      next[v] = std::move(acc);
    }
    for (const auto& [node, value] : next) trace.states[node].push_back(value);
    state = std::move(next);
  }

  // Trailing-equality scan; a delayed fixed point must be stable for at least
  // one recorded step.
  int last = trace.recorded_steps() - 1;
  int k = last;
  auto equal_states = [&](int a, int b) {
    for (const auto& v : trace.nodes)
      if (!(trace.at(v, a) == trace.at(v, b))) return false;
    return true;
  };
  while (k > 0 && equal_states(k - 1, last)) --k;
  if (k < last) trace.converged_at = k;
  return trace;
}

// Builds the exact interface A(v)(t) = { sigma(v)(t) } from a converged trace:
// consecutive equal states collapse into one until segment, ending in a
// globally at the converged value.
inline Annotation singleton_interface(const SimulationTrace& trace) {
  if (!trace.converged_at) throw NotConverged();
  int k = *trace.converged_at;

  Annotation out;
  for (const auto& v : trace.nodes) {
    const auto& vals = trace.states.at(v);
    // Segment start times for 0..k, collapsing equal runs.
    std::vector<std::pair<int, Value>> segments;
    for (int t = 0; t <= k; ++t)
      if (segments.empty() || !(segments.back().second == vals[static_cast<size_t>(t)]))
        segments.emplace_back(t, vals[static_cast<size_t>(t)]);

    TemporalOp op = TemporalOp::globally(Expr::eq(Expr::var("s"), Expr::lit(segments.back().second)));
    for (int i = static_cast<int>(segments.size()) - 2; i >= 0; --i) {
      long long next_start = segments[static_cast<size_t>(i) + 1].first;
      op = TemporalOp::until(Expr::eq(Expr::var("s"), Expr::lit(segments[static_cast<size_t>(i)].second)),
                             next_start, op);
    }
    out[v] = op;
  }
  return out;
}

}  // namespace lockstep
