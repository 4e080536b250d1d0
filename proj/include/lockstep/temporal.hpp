#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lockstep/network.hpp"

namespace lockstep {

enum class TemporalKind { Globally, Until, Finally, AndOp, OrOp, NotOp };

// A per-node interface or property: a function from time to a predicate over
// the route variable `s` (plus any symbolics). Witness times are concrete.
class TemporalOp {
 public:
  struct Node {
    TemporalKind kind;
    Expr pred;           // Globally / Until
    long long tau = 0;   // Until / Finally witness time (absolute)
    std::vector<TemporalOp> kids;
  };

  TemporalOp() = default;

  static TemporalOp globally(Expr pred) { return make({TemporalKind::Globally, std::move(pred), 0, {}}); }
  static TemporalOp until(Expr pred, long long tau, TemporalOp then_op) {
    if (tau < 0) throw Error("witness time must be a nonnegative concrete natural");
    return make({TemporalKind::Until, std::move(pred), tau, {std::move(then_op)}});
  }
  static TemporalOp finally(long long tau, TemporalOp then_op) {
    if (tau < 0) throw Error("witness time must be a nonnegative concrete natural");
    return make({TemporalKind::Finally, {}, tau, {std::move(then_op)}});
  }
  static TemporalOp and_op(TemporalOp a, TemporalOp b) {
    return make({TemporalKind::AndOp, {}, 0, {std::move(a), std::move(b)}});
  }
  static TemporalOp or_op(TemporalOp a, TemporalOp b) {
    return make({TemporalKind::OrOp, {}, 0, {std::move(a), std::move(b)}});
  }
  static TemporalOp not_op(TemporalOp a) { return make({TemporalKind::NotOp, {}, 0, {std::move(a)}}); }

  TemporalKind kind() const { return node_->kind; }
  const Expr& pred() const { return node_->pred; }
  long long tau() const { return node_->tau; }
  const std::vector<TemporalOp>& kids() const { return node_->kids; }
  bool valid() const { return node_ != nullptr; }

  // Largest witness time in the tree; pointwise tests sweep a bit past it.
  long long max_witness() const {
    long long m = 0;
    if (kind() == TemporalKind::Until || kind() == TemporalKind::Finally) m = tau();
    for (const auto& k : kids()) m = std::max(m, k.max_witness());
    return m;
  }

  std::string print() const {
    switch (kind()) {
      case TemporalKind::Globally: return "(G " + pred().print() + ")";
      case TemporalKind::Until:
        return "(U " + pred().print() + " " + std::to_string(tau()) + " " + kids()[0].print() + ")";
      case TemporalKind::Finally:
        return "(F " + std::to_string(tau()) + " " + kids()[0].print() + ")";
      case TemporalKind::AndOp: return "(and " + kids()[0].print() + " " + kids()[1].print() + ")";
      case TemporalKind::OrOp: return "(or " + kids()[0].print() + " " + kids()[1].print() + ")";
      case TemporalKind::NotOp: return "(not " + kids()[0].print() + ")";
    }
    return "?";
  }

 private:
  static TemporalOp make(Node n) {
    TemporalOp op;
    op.node_ = std::make_shared<const Node>(std::move(n));
    return op;
  }
  std::shared_ptr<const Node> node_;
};

// Node interfaces (A) and node properties (P) share this representation.
using Annotation = std::map<std::string, TemporalOp>;

// The predicate an operator denotes at concrete time t.
inline Expr apply_at(const TemporalOp& op, long long t) {
  switch (op.kind()) {
    case TemporalKind::Globally:
      return op.pred();
    case TemporalKind::Until:
      return t < op.tau() ? op.pred() : apply_at(op.kids()[0], t);
    case TemporalKind::Finally:
      return t < op.tau() ? Expr::lit_bool(true) : apply_at(op.kids()[0], t);
    case TemporalKind::AndOp:
      return Expr::and_({apply_at(op.kids()[0], t), apply_at(op.kids()[1], t)});
    case TemporalKind::OrOp:
      return Expr::or_({apply_at(op.kids()[0], t), apply_at(op.kids()[1], t)});
    case TemporalKind::NotOp:
      return Expr::not_(apply_at(op.kids()[0], t));
  }
  throw Error("apply_at: invalid operator");
}

// Expands the operator into a predicate over a free integer time variable.
// For every concrete n >= 0, substituting n for the time variable yields a
// predicate equivalent to apply_at(op, n).
inline Expr lower_symbolic(const TemporalOp& op, const std::string& time_var) {
  switch (op.kind()) {
    case TemporalKind::Globally:
      return op.pred();
    case TemporalKind::Until:
      return Expr::if_(Expr::lt(Expr::var(time_var), Expr::lit_int(op.tau())), op.pred(),
                       lower_symbolic(op.kids()[0], time_var));
    case TemporalKind::Finally:
      return Expr::if_(Expr::lt(Expr::var(time_var), Expr::lit_int(op.tau())), Expr::lit_bool(true),
                       lower_symbolic(op.kids()[0], time_var));
    case TemporalKind::AndOp:
      return Expr::and_({lower_symbolic(op.kids()[0], time_var), lower_symbolic(op.kids()[1], time_var)});
    case TemporalKind::OrOp:
      return Expr::or_({lower_symbolic(op.kids()[0], time_var), lower_symbolic(op.kids()[1], time_var)});
    case TemporalKind::NotOp:
      return Expr::not_(lower_symbolic(op.kids()[0], time_var));
  }
  throw Error("lower_symbolic: invalid operator");
}

// Drops the temporal structure, keeping the eventual predicate. Only defined
// for single-witness-time shapes: G(p), F_t(G(p)), p' U_t G(p), and lifted
// and/or combinations of those.
inline Expr erase_temporal(const TemporalOp& op) {
  switch (op.kind()) {
    case TemporalKind::Globally:
      return op.pred();
    case TemporalKind::Until:
    case TemporalKind::Finally:
      if (op.kids()[0].kind() != TemporalKind::Globally)
        throw UnsupportedShape("witnessed operator must end in a globally shape: " + op.print());
      return op.kids()[0].pred();
    case TemporalKind::AndOp:
      return Expr::and_({erase_temporal(op.kids()[0]), erase_temporal(op.kids()[1])});
    case TemporalKind::OrOp:
      return Expr::or_({erase_temporal(op.kids()[0]), erase_temporal(op.kids()[1])});
    case TemporalKind::NotOp:
      throw UnsupportedShape("negation has no erased form: " + op.print());
  }
  throw Error("erase_temporal: invalid operator");
}

// True iff the operator is a plain Globally (the shape the unsound
// stable-state check accepts).
inline bool is_globally_shape(const TemporalOp& op) { return op.kind() == TemporalKind::Globally; }

// Well-sortedness of every per-node operator against the route sort.
inline void check_annotation(const Annotation& a, const Topology& topo, const Sort& route_sort,
                             const SortEnv& symbolics) {
  for (const auto& id : topo.nodes)
    if (!a.count(id)) throw Error("annotation is missing node '" + id + "'");
  for (const auto& [node, op] : a) {
    if (!topo.has_node(node)) throw Error("annotation names unknown node '" + node + "'");
    std::vector<const TemporalOp*> stack{&op};
    while (!stack.empty()) {
      const TemporalOp* cur = stack.back();
      stack.pop_back();
      if (cur->kind() == TemporalKind::Globally || cur->kind() == TemporalKind::Until) {
        SortEnv env = symbolics;
        env["s"] = route_sort;
        Sort s = sort_check(cur->pred(), env);
        if (s != Sort::boolean())
          throw SortError("annotation(" + node + ")", "bool", s.to_string());
      }
      for (const auto& k : cur->kids()) stack.push_back(&k);
    }
  }
}

inline void collect_string_literals(const TemporalOp& op, std::set<std::string>& out) {
  if (op.kind() == TemporalKind::Globally || op.kind() == TemporalKind::Until)
    collect_string_literals(op.pred(), out);
  for (const auto& k : op.kids()) collect_string_literals(k, out);
}

inline void collect_string_literals(const Annotation& a, std::set<std::string>& out) {
  for (const auto& [node, op] : a) collect_string_literals(op, out);
}

}  // namespace lockstep
