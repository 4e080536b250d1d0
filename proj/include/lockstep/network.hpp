#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lockstep/eval.hpp"

namespace lockstep {

struct Topology {
  std::vector<std::string> nodes;                        // declaration order, unique
  std::vector<std::pair<std::string, std::string>> edges;  // directed (u,v)

  bool has_node(const std::string& id) const {
    return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
  }

  // In-neighbors of v, sorted by node id.
  std::vector<std::string> preds(const std::string& v) const {
    std::vector<std::string> out;
    for (const auto& [u, w] : edges)
      if (w == v) out.push_back(u);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

struct SymbolicVar {
  std::string name;
  Sort sort;
  std::optional<Expr> assumption;  // Bool over Var(name); assumed, never checked
};

// The routing algebra instance: topology, route sort, and the init/transfer/
// merge policy expressions, plus any symbolic inputs.
struct NetworkInstance {
  Topology topo;
  Sort route_sort;
  std::map<std::string, Expr> init;                               // node -> expr
  std::map<std::pair<std::string, std::string>, Expr> transfer;   // edge -> expr over {s}
  Expr merge;                                                     // over {s1, s2}
  std::vector<SymbolicVar> symbolics;
  std::set<std::string> extra_alphabet;  // string literals declared by the network file

  SortEnv symbolic_env() const {
    SortEnv env;
    for (const auto& sym : symbolics) env[sym.name] = sym.sort;
    return env;
  }

  bool is_closed() const {
    if (!symbolics.empty()) return false;
    for (const auto& [node, e] : init)
      if (!e.free_vars().empty()) return false;
    return true;
  }

  const Expr& transfer_for(const std::string& u, const std::string& v) const {
    auto it = transfer.find({u, v});
    if (it == transfer.end()) throw Error("no transfer for edge " + u + "->" + v);
    return it->second;
  }

  // init_v merged with the transferred inputs, folded in the callers' order.
  Expr merge_fold(const Expr& init_expr, const std::vector<Expr>& transferred) const {
    Expr acc = init_expr;
    for (const auto& t : transferred)
      acc = substitute(merge, {{"s1", acc}, {"s2", t}});
    return acc;
  }

  Value merge_values(const Value& a, const Value& b, const ValueEnv& sym_env = {}) const {
    ValueEnv env = sym_env;
    env["s1"] = a;
    env["s2"] = b;
    return eval_expr(merge, env);
  }
};

namespace detail {

inline void collect_string_literals_value(const Value& v, std::set<std::string>& out) {
  switch (v.sort().kind()) {
    case SortKind::StringSet:
      out.insert(v.as_strings().begin(), v.as_strings().end());
      return;
    case SortKind::Option:
      if (!v.is_none()) collect_string_literals_value(v.some_value(), out);
      return;
    case SortKind::Record:
      for (const auto& f : v.record_fields()) collect_string_literals_value(f, out);
      return;
    default:
      return;
  }
}

}  // namespace detail

// String literals appearing in an expression: set-operation arguments plus
// the contents of string-set literals. This drives the solver's alphabet.
inline void collect_string_literals(const Expr& e, std::set<std::string>& out) {
  const auto& n = e.node();
  if (n.kind == ExprKind::SetContains || n.kind == ExprKind::SetInsert) out.insert(n.name);
  if (n.kind == ExprKind::Literal) detail::collect_string_literals_value(*n.literal, out);
  for (const auto& a : n.args) collect_string_literals(a, out);
}

inline std::set<std::string> network_string_literals(const NetworkInstance& n) {
  std::set<std::string> out = n.extra_alphabet;
  for (const auto& [node, e] : n.init) collect_string_literals(e, out);
  for (const auto& [edge, e] : n.transfer) collect_string_literals(e, out);
  collect_string_literals(n.merge, out);
  for (const auto& sym : n.symbolics)
    if (sym.assumption) collect_string_literals(*sym.assumption, out);
  return out;
}

struct Diagnostic {
  std::string code;     // e.g. UnknownNode, SortDiagnostic
  std::string where;    // node or edge
  std::string message;

  std::string to_string() const { return code + "(" + where + "): " + message; }
};

// Empty result iff all NetworkInstance invariants hold.
inline std::vector<Diagnostic> validate_network(const NetworkInstance& n) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  for (const auto& id : n.topo.nodes) {
    if (!seen.insert(id).second) out.push_back({"DuplicateNode", id, "node declared twice"});
    if (id.find('!') != std::string::npos)
      out.push_back({"BadNodeId", id, "node ids must not contain '!'"});
  }
  std::set<std::pair<std::string, std::string>> edge_set;
  for (const auto& [u, v] : n.topo.edges) {
    std::string ename = u + "->" + v;
    if (!n.topo.has_node(u)) out.push_back({"UnknownNode", u, "edge " + ename + " references undeclared node"});
    if (!n.topo.has_node(v)) out.push_back({"UnknownNode", v, "edge " + ename + " references undeclared node"});
    if (u == v) out.push_back({"SelfLoop", ename, "self-loops are rejected"});
    if (!edge_set.insert({u, v}).second) out.push_back({"DuplicateEdge", ename, "edge declared twice"});
  }

  SortEnv sym_env = n.symbolic_env();
  for (const auto& sym : n.symbolics) {
    if (sym.name.find('!') != std::string::npos)
      out.push_back({"BadSymbolicName", sym.name, "symbolic names must not contain '!'"});
    if (sym.assumption) {
      try {
        SortEnv env{{sym.name, sym.sort}};
        Sort s = sort_check(*sym.assumption, env);
        if (s != Sort::boolean())
          out.push_back({"SortDiagnostic", sym.name, "assumption must be bool, found " + s.to_string()});
      } catch (const Error& err) {
        out.push_back({"SortDiagnostic", sym.name, err.what()});
      }
    }
  }

  for (const auto& id : n.topo.nodes) {
    auto it = n.init.find(id);
    if (it == n.init.end()) {
      out.push_back({"MissingInit", id, "no initial route expression"});
      continue;
    }
    try {
      Sort s = sort_check(it->second, sym_env);
      if (s != n.route_sort)
        out.push_back({"SortDiagnostic", id,
                       "init has sort " + s.to_string() + ", expected " + n.route_sort.to_string()});
    } catch (const Error& err) {
      out.push_back({"SortDiagnostic", id, err.what()});
    }
  }
  for (const auto& [node, e] : n.init)
    if (!n.topo.has_node(node)) out.push_back({"UnknownNode", node, "init for undeclared node"});

  for (const auto& [u, v] : n.topo.edges) {
    std::string ename = u + "->" + v;
    auto it = n.transfer.find({u, v});
    if (it == n.transfer.end()) {
      out.push_back({"MissingTransfer", ename, "no transfer expression"});
      continue;
    }
    try {
      SortEnv env = sym_env;
      env["s"] = n.route_sort;
      Sort s = sort_check(it->second, env);
      if (s != n.route_sort)
        out.push_back({"SortDiagnostic", ename,
                       "transfer has sort " + s.to_string() + ", expected " + n.route_sort.to_string()});
    } catch (const Error& err) {
      out.push_back({"SortDiagnostic", ename, err.what()});
    }
  }
  for (const auto& [edge, e] : n.transfer)
    if (!edge_set.count(edge))
      out.push_back({"UnknownEdge", edge.first + "->" + edge.second, "transfer for undeclared edge"});

  if (n.merge.valid()) {
    try {
      SortEnv env = sym_env;
      env["s1"] = n.route_sort;
      env["s2"] = n.route_sort;
      Sort s = sort_check(n.merge, env);
      if (s != n.route_sort)
        out.push_back({"SortDiagnostic", "merge",
                       "merge has sort " + s.to_string() + ", expected " + n.route_sort.to_string()});
    } catch (const Error& err) {
      out.push_back({"SortDiagnostic", "merge", err.what()});
    }
  } else {
    out.push_back({"MissingMerge", "merge", "no merge expression"});
  }
  return out;
}

// Seeded random inhabitant of a sort; string sets draw from `alphabet`.
inline Value random_value(const Sort& sort, std::mt19937_64& rng,
                          const std::vector<std::string>& alphabet) {
  switch (sort.kind()) {
    case SortKind::Bool:
      return Value::boolean(rng() & 1);
    case SortKind::Int:
      return Value::integer(static_cast<long long>(rng() % 1000));
    case SortKind::BitVec:
      return Value::bitvec(sort, rng());
    case SortKind::Enum:
      return Value::enum_label(sort, sort.labels()[rng() % sort.labels().size()]);
    case SortKind::StringSet: {
      std::set<std::string> elems;
      for (const auto& s : alphabet)
        if (rng() & 1) elems.insert(s);
      return Value::string_set(std::move(elems));
    }
    case SortKind::Option:
      if (rng() % 4 == 0) return Value::none(sort);
      return Value::some(random_value(sort.inner(), rng, alphabet));
    case SortKind::Record: {
      std::vector<Value> fields;
      for (const auto& [name, fs] : sort.fields()) fields.push_back(random_value(fs, rng, alphabet));
      return Value::record(sort, std::move(fields));
    }
  }
  throw Error("random_value: invalid sort");
}

struct MergeLawReport {
  int samples = 0;
  // First violating pair/triple, if any.
  std::optional<std::string> commutativity_violation;
  std::optional<std::string> associativity_violation;

  bool ok() const { return !commutativity_violation && !associativity_violation; }
};

// Randomized, advisory check that merge is commutative and associative.
// The verification conditions assume these laws rather than proving them.
inline MergeLawReport check_merge_laws(const NetworkInstance& n, int samples, std::uint64_t seed) {
  MergeLawReport report;
  report.samples = samples;
  std::mt19937_64 rng(seed);
  auto alphabet_set = network_string_literals(n);
  std::vector<std::string> alphabet(alphabet_set.begin(), alphabet_set.end());

  ValueEnv sym_env;
  for (const auto& sym : n.symbolics) sym_env[sym.name] = random_value(sym.sort, rng, alphabet);

  for (int i = 0; i < samples; ++i) {
    Value a = random_value(n.route_sort, rng, alphabet);
    Value b = random_value(n.route_sort, rng, alphabet);
    Value c = random_value(n.route_sort, rng, alphabet);
    if (!report.commutativity_violation) {
      Value ab = n.merge_values(a, b, sym_env);
      Value ba = n.merge_values(b, a, sym_env);
      if (ab != ba)
        report.commutativity_violation =
            "merge(" + a.render() + ", " + b.render() + ") = " + ab.render() + " but reversed gives " + ba.render();
    }
    if (!report.associativity_violation) {
      Value left = n.merge_values(n.merge_values(a, b, sym_env), c, sym_env);
      Value right = n.merge_values(a, n.merge_values(b, c, sym_env), sym_env);
      if (left != right)
        report.associativity_violation = "((" + a.render() + " + " + b.render() + ") + " + c.render() +
                                         ") = " + left.render() + " but right-association gives " + right.render();
    }
    if (report.commutativity_violation && report.associativity_violation) break;
  }
  return report;
}

}  // namespace lockstep
