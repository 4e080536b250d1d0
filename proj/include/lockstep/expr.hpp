#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lockstep/value.hpp"

namespace lockstep {

enum class ExprKind {
  Literal,
  Var,
  FieldGet,
  RecordMake,
  RecordWith,
  If,
  And,
  Or,
  Not,
  Eq,
  Neq,
  Lt,
  Leq,
  Add,
  Sub,
  Min,
  Max,
  SetContains,
  SetInsert,
  NoneLit,
  SomeWrap,
  OptionCase,
};

// Policy expression AST. One definition, two interpreters: the concrete
// evaluator and the solver encoder both walk this tree.
class Expr {
 public:
  struct Node {
    ExprKind kind;
    std::optional<Value> literal;             // Literal
    std::string name;                         // Var / field / set element / case binder
    std::optional<Sort> sort;                 // NoneLit inner sort
    std::vector<std::string> field_names;     // RecordMake
    std::vector<Expr> args;
  };

  Expr() = default;

  ExprKind kind() const { return node_->kind; }
  const Node& node() const { return *node_; }
  const std::vector<Expr>& args() const { return node_->args; }
  const std::string& name() const { return node_->name; }
  const Value& literal() const { return *node_->literal; }
  bool valid() const { return node_ != nullptr; }

  // Physical identity; structural equality goes through print().
  bool same_node(const Expr& other) const { return node_ == other.node_; }

  static Expr lit(Value v) { return make({ExprKind::Literal, std::move(v), "", {}, {}, {}}); }
  static Expr lit_bool(bool b) { return lit(Value::boolean(b)); }
  static Expr lit_int(long long i) { return lit(Value::integer(i)); }
  static Expr var(std::string name) { return make({ExprKind::Var, {}, std::move(name), {}, {}, {}}); }
  static Expr get(Expr e, std::string field) {
    return make({ExprKind::FieldGet, {}, std::move(field), {}, {}, {std::move(e)}});
  }
  static Expr record_make(std::vector<std::string> names, std::vector<Expr> values) {
    if (names.size() != values.size()) throw Error("record_make arity mismatch");
    return make({ExprKind::RecordMake, {}, "", {}, std::move(names), std::move(values)});
  }
  static Expr with(Expr e, std::string field, Expr value) {
    return make({ExprKind::RecordWith, {}, std::move(field), {}, {}, {std::move(e), std::move(value)}});
  }
  static Expr if_(Expr cond, Expr then_e, Expr else_e) {
    return make({ExprKind::If, {}, "", {}, {}, {std::move(cond), std::move(then_e), std::move(else_e)}});
  }
  static Expr and_(std::vector<Expr> args) {
    if (args.size() == 1) return args.front();
    return make({ExprKind::And, {}, "", {}, {}, std::move(args)});
  }
  static Expr or_(std::vector<Expr> args) {
    if (args.size() == 1) return args.front();
    return make({ExprKind::Or, {}, "", {}, {}, std::move(args)});
  }
  static Expr not_(Expr e) { return make({ExprKind::Not, {}, "", {}, {}, {std::move(e)}}); }
  static Expr eq(Expr a, Expr b) { return binary(ExprKind::Eq, std::move(a), std::move(b)); }
  static Expr neq(Expr a, Expr b) { return binary(ExprKind::Neq, std::move(a), std::move(b)); }
  static Expr lt(Expr a, Expr b) { return binary(ExprKind::Lt, std::move(a), std::move(b)); }
  static Expr leq(Expr a, Expr b) { return binary(ExprKind::Leq, std::move(a), std::move(b)); }
  static Expr add(Expr a, Expr b) { return binary(ExprKind::Add, std::move(a), std::move(b)); }
  static Expr sub(Expr a, Expr b) { return binary(ExprKind::Sub, std::move(a), std::move(b)); }
  static Expr min(Expr a, Expr b) { return binary(ExprKind::Min, std::move(a), std::move(b)); }
  static Expr max(Expr a, Expr b) { return binary(ExprKind::Max, std::move(a), std::move(b)); }
  static Expr contains(Expr e, std::string elem) {
    return make({ExprKind::SetContains, {}, std::move(elem), {}, {}, {std::move(e)}});
  }
  static Expr insert(Expr e, std::string elem) {
    return make({ExprKind::SetInsert, {}, std::move(elem), {}, {}, {std::move(e)}});
  }
  static Expr none(Sort inner_sort) {
    return make({ExprKind::NoneLit, {}, "", std::move(inner_sort), {}, {}});
  }
  static Expr some(Expr e) { return make({ExprKind::SomeWrap, {}, "", {}, {}, {std::move(e)}}); }
  static Expr option_case(Expr scrutinee, Expr none_branch, std::string binder, Expr some_branch) {
    return make({ExprKind::OptionCase, {}, std::move(binder), {}, {},
                 {std::move(scrutinee), std::move(none_branch), std::move(some_branch)}});
  }

  static Expr implies(Expr a, Expr b) { return or_({not_(std::move(a)), std::move(b)}); }

  void collect_free_vars(std::set<std::string>& out) const {
    collect_free_vars_impl(out, {});
  }
  std::set<std::string> free_vars() const {
    std::set<std::string> out;
    collect_free_vars(out);
    return out;
  }

  // Stable s-expression rendering; used for diagnostics and golden tests.
  std::string print() const {
    std::string out;
    print_impl(out);
    return out;
  }

 private:
  static Expr make(Node node) {
    Expr e;
    e.node_ = std::make_shared<const Node>(std::move(node));
    return e;
  }
  static Expr binary(ExprKind kind, Expr a, Expr b) {
    return make({kind, {}, "", {}, {}, {std::move(a), std::move(b)}});
  }

  void collect_free_vars_impl(std::set<std::string>& out, std::set<std::string> bound) const {
    const Node& n = *node_;
    switch (n.kind) {
      case ExprKind::Var:
        if (!bound.count(n.name)) out.insert(n.name);
        return;
      case ExprKind::OptionCase: {
        n.args[0].collect_free_vars_impl(out, bound);
        n.args[1].collect_free_vars_impl(out, bound);
        auto inner = bound;
        inner.insert(n.name);
        n.args[2].collect_free_vars_impl(out, std::move(inner));
        return;
      }
      default:
        for (const auto& a : n.args) a.collect_free_vars_impl(out, bound);
        return;
    }
  }

  void print_impl(std::string& out) const {
    const Node& n = *node_;
    auto head = [&](const char* op) {
      out += "(";
      out += op;
      for (const auto& a : n.args) {
        out += " ";
        a.print_impl(out);
      }
      out += ")";
    };
    switch (n.kind) {
      case ExprKind::Literal: out += n.literal->render(); return;
      case ExprKind::Var: out += n.name; return;
      case ExprKind::FieldGet:
        out += "(get ";
        n.args[0].print_impl(out);
        out += " " + n.name + ")";
        return;
      case ExprKind::RecordMake: {
        out += "(record";
        for (size_t i = 0; i < n.args.size(); ++i) {
          out += " (" + n.field_names[i] + " ";
          n.args[i].print_impl(out);
          out += ")";
        }
        out += ")";
        return;
      }
      case ExprKind::RecordWith:
        out += "(with ";
        n.args[0].print_impl(out);
        out += " " + n.name + " ";
        n.args[1].print_impl(out);
        out += ")";
        return;
      case ExprKind::If: head("if"); return;
      case ExprKind::And: head("and"); return;
      case ExprKind::Or: head("or"); return;
      case ExprKind::Not: head("not"); return;
      case ExprKind::Eq: head("eq"); return;
      case ExprKind::Neq: head("neq"); return;
      case ExprKind::Lt: head("lt"); return;
      case ExprKind::Leq: head("leq"); return;
      case ExprKind::Add: head("add"); return;
      case ExprKind::Sub: head("sub"); return;
      case ExprKind::Min: head("min"); return;
      case ExprKind::Max: head("max"); return;
      case ExprKind::SetContains:
        out += "(contains ";
        n.args[0].print_impl(out);
        out += " \"" + n.name + "\")";
        return;
      case ExprKind::SetInsert:
        out += "(insert ";
        n.args[0].print_impl(out);
        out += " \"" + n.name + "\")";
        return;
      case ExprKind::NoneLit: out += "(none " + n.sort->to_string() + ")"; return;
      case ExprKind::SomeWrap: head("some"); return;
      case ExprKind::OptionCase:
        out += "(case ";
        n.args[0].print_impl(out);
        out += " ";
        n.args[1].print_impl(out);
        out += " (" + n.name + " ";
        n.args[2].print_impl(out);
        out += "))";
        return;
    }
  }

  std::shared_ptr<const Node> node_;
};

using SortEnv = std::map<std::string, Sort>;

namespace detail {

inline Sort sort_check_impl(const Expr& e, const SortEnv& env, const std::string& path);

inline Sort expect(const Expr& e, const SortEnv& env, const std::string& path, const Sort& want) {
  Sort got = sort_check_impl(e, env, path);
  if (got != want) throw SortError(path, want.to_string(), got.to_string());
  return got;
}

inline Sort expect_numeric(const Expr& e, const SortEnv& env, const std::string& path) {
  Sort got = sort_check_impl(e, env, path);
  if (got.kind() != SortKind::Int && got.kind() != SortKind::BitVec)
    throw SortError(path, "int or bitvec", got.to_string());
  return got;
}

inline Sort sort_check_impl(const Expr& e, const SortEnv& env, const std::string& path) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Literal:
      return n.literal->sort();
    case ExprKind::Var: {
      auto it = env.find(n.name);
      if (it == env.end()) throw UnboundVar(path, n.name);
      return it->second;
    }
    case ExprKind::FieldGet: {
      Sort rec = sort_check_impl(n.args[0], env, path + ".get");
      if (!rec.is(SortKind::Record)) throw SortError(path + ".get", "record", rec.to_string());
      const Sort* fs = rec.field_sort(n.name);
      if (!fs) throw SortError(path + ".get", "record with field '" + n.name + "'", rec.to_string());
      return *fs;
    }
    case ExprKind::RecordMake: {
      std::vector<std::pair<std::string, Sort>> fields;
      for (size_t i = 0; i < n.args.size(); ++i)
        fields.emplace_back(n.field_names[i],
                            sort_check_impl(n.args[i], env, path + "." + n.field_names[i]));
      return Sort::record(std::move(fields));
    }
    case ExprKind::RecordWith: {
      Sort rec = sort_check_impl(n.args[0], env, path + ".with");
      if (!rec.is(SortKind::Record)) throw SortError(path + ".with", "record", rec.to_string());
      const Sort* fs = rec.field_sort(n.name);
      if (!fs) throw SortError(path + ".with", "record with field '" + n.name + "'", rec.to_string());
      expect(n.args[1], env, path + ".with." + n.name, *fs);
      return rec;
    }
    case ExprKind::If: {
      expect(n.args[0], env, path + ".if.cond", Sort::boolean());
      Sort then_s = sort_check_impl(n.args[1], env, path + ".if.then");
      Sort else_s = sort_check_impl(n.args[2], env, path + ".if.else");
      if (then_s != else_s) throw SortError(path + ".if.else", then_s.to_string(), else_s.to_string());
      return then_s;
    }
    case ExprKind::And:
    case ExprKind::Or: {
      for (size_t i = 0; i < n.args.size(); ++i)
        expect(n.args[i], env, path + ".bool[" + std::to_string(i) + "]", Sort::boolean());
      return Sort::boolean();
    }
    case ExprKind::Not:
      expect(n.args[0], env, path + ".not", Sort::boolean());
      return Sort::boolean();
    case ExprKind::Eq:
    case ExprKind::Neq: {
      Sort a = sort_check_impl(n.args[0], env, path + ".cmp.lhs");
      expect(n.args[1], env, path + ".cmp.rhs", a);
      return Sort::boolean();
    }
    case ExprKind::Lt:
    case ExprKind::Leq: {
      Sort a = expect_numeric(n.args[0], env, path + ".ord.lhs");
      expect(n.args[1], env, path + ".ord.rhs", a);
      return Sort::boolean();
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Min:
    case ExprKind::Max: {
      Sort a = expect_numeric(n.args[0], env, path + ".arith.lhs");
      return expect(n.args[1], env, path + ".arith.rhs", a);
    }
    case ExprKind::SetContains:
      expect(n.args[0], env, path + ".contains", Sort::string_set());
      return Sort::boolean();
    case ExprKind::SetInsert:
      expect(n.args[0], env, path + ".insert", Sort::string_set());
      return Sort::string_set();
    case ExprKind::NoneLit:
      return Sort::option(*n.sort);
    case ExprKind::SomeWrap:
      return Sort::option(sort_check_impl(n.args[0], env, path + ".some"));
    case ExprKind::OptionCase: {
      Sort scrut = sort_check_impl(n.args[0], env, path + ".case.scrutinee");
      if (!scrut.is(SortKind::Option))
        throw SortError(path + ".case.scrutinee", "option", scrut.to_string());
      Sort none_s = sort_check_impl(n.args[1], env, path + ".case.none");
      SortEnv inner = env;
      inner[n.name] = scrut.inner();
      Sort some_s = sort_check_impl(n.args[2], inner, path + ".case.some");
      if (none_s != some_s) throw SortError(path + ".case.some", none_s.to_string(), some_s.to_string());
      return none_s;
    }
  }
  throw Error("sort_check: invalid expression");
}

}  // namespace detail

// Total, deterministic sort inference. Throws SortError / UnboundVar.
inline Sort sort_check(const Expr& e, const SortEnv& env) {
  return detail::sort_check_impl(e, env, "$");
}

namespace detail {

inline Expr substitute_impl(const Expr& e, const std::map<std::string, Expr>& sub, int& fresh);

inline Expr rebuild(const Expr& e, std::vector<Expr> new_args) {
  const auto& n = e.node();
  bool unchanged = true;
  for (size_t i = 0; i < new_args.size(); ++i)
    if (!new_args[i].same_node(n.args[i])) unchanged = false;
  if (unchanged) return e;
  switch (n.kind) {
    case ExprKind::FieldGet: return Expr::get(new_args[0], n.name);
    case ExprKind::RecordMake: return Expr::record_make(n.field_names, std::move(new_args));
    case ExprKind::RecordWith: return Expr::with(new_args[0], n.name, new_args[1]);
    case ExprKind::If: return Expr::if_(new_args[0], new_args[1], new_args[2]);
    case ExprKind::And: return Expr::and_(std::move(new_args));
    case ExprKind::Or: return Expr::or_(std::move(new_args));
    case ExprKind::Not: return Expr::not_(new_args[0]);
    case ExprKind::Eq: return Expr::eq(new_args[0], new_args[1]);
    case ExprKind::Neq: return Expr::neq(new_args[0], new_args[1]);
    case ExprKind::Lt: return Expr::lt(new_args[0], new_args[1]);
    case ExprKind::Leq: return Expr::leq(new_args[0], new_args[1]);
    case ExprKind::Add: return Expr::add(new_args[0], new_args[1]);
    case ExprKind::Sub: return Expr::sub(new_args[0], new_args[1]);
    case ExprKind::Min: return Expr::min(new_args[0], new_args[1]);
    case ExprKind::Max: return Expr::max(new_args[0], new_args[1]);
    case ExprKind::SetContains: return Expr::contains(new_args[0], n.name);
    case ExprKind::SetInsert: return Expr::insert(new_args[0], n.name);
    case ExprKind::SomeWrap: return Expr::some(new_args[0]);
    default: throw Error("rebuild: unexpected kind");
  }
}

inline Expr substitute_impl(const Expr& e, const std::map<std::string, Expr>& sub, int& fresh) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Literal:
    case ExprKind::NoneLit:
      return e;
    case ExprKind::Var: {
      auto it = sub.find(n.name);
      return it == sub.end() ? e : it->second;
    }
    case ExprKind::OptionCase: {
      Expr scrut = substitute_impl(n.args[0], sub, fresh);
      Expr none_b = substitute_impl(n.args[1], sub, fresh);
      std::string binder = n.name;
      Expr some_body = n.args[2];
      auto inner = sub;
      inner.erase(binder);
      // Rename the binder when a replacement would capture it.
      bool capture = false;
      for (const auto& [name, repl] : inner)
        if (some_body.free_vars().count(name) && repl.free_vars().count(binder)) capture = true;
      if (capture) {
        std::string renamed = binder + "#" + std::to_string(fresh++);
        std::map<std::string, Expr> rename{{binder, Expr::var(renamed)}};
        some_body = substitute_impl(some_body, rename, fresh);
        binder = renamed;
      }
      Expr some_b = substitute_impl(some_body, inner, fresh);
      if (scrut.same_node(n.args[0]) && none_b.same_node(n.args[1]) && some_b.same_node(n.args[2]))
        return e;
      return Expr::option_case(scrut, none_b, binder, some_b);
    }
    default: {
      std::vector<Expr> new_args;
      new_args.reserve(n.args.size());
      for (const auto& a : n.args) new_args.push_back(substitute_impl(a, sub, fresh));
      return rebuild(e, std::move(new_args));
    }
  }
}

}  // namespace detail

// Capture-avoiding parallel substitution of variables by expressions.
inline Expr substitute(const Expr& e, const std::map<std::string, Expr>& sub) {
  if (sub.empty()) return e;
  int fresh = 0;
  return detail::substitute_impl(e, sub, fresh);
}

}  // namespace lockstep
