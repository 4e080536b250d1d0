#pragma once

#include <map>
#include <string>

#include "lockstep/expr.hpp"

namespace lockstep {

using ValueEnv = std::map<std::string, Value>;

// Concrete evaluation. Total and deterministic on well-sorted input; the
// solver encoder must agree with this function on every assignment.
inline Value eval_expr(const Expr& e, const ValueEnv& env) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Literal:
      return *n.literal;
    case ExprKind::Var: {
      auto it = env.find(n.name);
      if (it == env.end()) throw UnboundVar("$", n.name);
      return it->second;
    }
    case ExprKind::FieldGet:
      return eval_expr(n.args[0], env).field(n.name);
    case ExprKind::RecordMake: {
      std::vector<std::pair<std::string, Sort>> field_sorts;
      std::vector<Value> fields;
      fields.reserve(n.args.size());
      for (size_t i = 0; i < n.args.size(); ++i) {
        fields.push_back(eval_expr(n.args[i], env));
        field_sorts.emplace_back(n.field_names[i], fields.back().sort());
      }
      return Value::record(Sort::record(std::move(field_sorts)), std::move(fields));
    }
    case ExprKind::RecordWith: {
      Value rec = eval_expr(n.args[0], env);
      Value val = eval_expr(n.args[1], env);
      int idx = rec.sort().field_index(n.name);
      if (idx < 0) throw Error("with: no field '" + n.name + "'");
      std::vector<Value> fields = rec.record_fields();
      fields[static_cast<size_t>(idx)] = std::move(val);
      return Value::record(rec.sort(), std::move(fields));
    }
    case ExprKind::If:
      return eval_expr(n.args[0], env).as_bool() ? eval_expr(n.args[1], env)
                                                 : eval_expr(n.args[2], env);
    case ExprKind::And: {
      for (const auto& a : n.args)
        if (!eval_expr(a, env).as_bool()) return Value::boolean(false);
      return Value::boolean(true);
    }
    case ExprKind::Or: {
      for (const auto& a : n.args)
        if (eval_expr(a, env).as_bool()) return Value::boolean(true);
      return Value::boolean(false);
    }
    case ExprKind::Not:
      return Value::boolean(!eval_expr(n.args[0], env).as_bool());
    case ExprKind::Eq:
      return Value::boolean(eval_expr(n.args[0], env) == eval_expr(n.args[1], env));
    case ExprKind::Neq:
      return Value::boolean(eval_expr(n.args[0], env) != eval_expr(n.args[1], env));
    case ExprKind::Lt:
    case ExprKind::Leq: {
      Value a = eval_expr(n.args[0], env);
      Value b = eval_expr(n.args[1], env);
      bool strict = n.kind == ExprKind::Lt;
      if (a.sort().is(SortKind::Int))
        return Value::boolean(strict ? a.as_int() < b.as_int() : a.as_int() <= b.as_int());
      return Value::boolean(strict ? a.as_bits() < b.as_bits() : a.as_bits() <= b.as_bits());
    }
    case ExprKind::Add: {
      Value a = eval_expr(n.args[0], env);
      Value b = eval_expr(n.args[1], env);
      if (a.sort().is(SortKind::Int)) return Value::integer(a.as_int() + b.as_int());
      return Value::bitvec(a.sort(), a.as_bits() + b.as_bits());
    }
    case ExprKind::Sub: {
      Value a = eval_expr(n.args[0], env);
      Value b = eval_expr(n.args[1], env);
      // Nonnegative ints subtract saturating at 0; bitvectors wrap.
      if (a.sort().is(SortKind::Int))
        return Value::integer(a.as_int() >= b.as_int() ? a.as_int() - b.as_int() : 0);
      return Value::bitvec(a.sort(), a.as_bits() - b.as_bits());
    }
    case ExprKind::Min:
    case ExprKind::Max: {
      Value a = eval_expr(n.args[0], env);
      Value b = eval_expr(n.args[1], env);
      bool a_le_b = a.sort().is(SortKind::Int) ? a.as_int() <= b.as_int() : a.as_bits() <= b.as_bits();
      if (n.kind == ExprKind::Min) return a_le_b ? a : b;
      return a_le_b ? b : a;
    }
    case ExprKind::SetContains:
      return Value::boolean(eval_expr(n.args[0], env).as_strings().count(n.name) > 0);
    case ExprKind::SetInsert: {
      auto elems = eval_expr(n.args[0], env).as_strings();
      elems.insert(n.name);
      return Value::string_set(std::move(elems));
    }
    case ExprKind::NoneLit:
      return Value::none(Sort::option(*n.sort));
    case ExprKind::SomeWrap:
      return Value::some(eval_expr(n.args[0], env));
    case ExprKind::OptionCase: {
      Value scrut = eval_expr(n.args[0], env);
      if (scrut.is_none()) return eval_expr(n.args[1], env);
      ValueEnv inner = env;
      inner[n.name] = scrut.some_value();
      return eval_expr(n.args[2], inner);
    }
  }
  throw Error("eval_expr: invalid expression");
}

}  // namespace lockstep
