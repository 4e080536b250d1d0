#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lockstep/eval.hpp"
#include "lockstep/smt/sexpr.hpp"

namespace lockstep::smt {

// A rendered solver term together with its sort.
struct SolverTerm {
  std::string text;
  Sort sort;
};

inline bool simple_symbol(const std::string& name) {
  if (name.empty()) return false;
  auto ok = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           std::string("~!@$%^&*_-+=<>.?/").find(c) != std::string::npos;
  };
  if (name[0] >= '0' && name[0] <= '9') return false;
  for (char c : name)
    if (!ok(c)) return false;
  return true;
}

inline std::string symbol(const std::string& name) {
  if (simple_symbol(name)) return name;
  if (name.find('|') != std::string::npos || name.find('\\') != std::string::npos)
    throw Error("cannot render symbol '" + name + "'");
  return "|" + name + "|";
}

// Translates sorts, values, and expressions into SMT-LIB v2 text.
// One encoder owns one query's datatype declarations and string alphabet,
// and decodes the solver's model back into Values.
class SmtEncoder {
 public:
  explicit SmtEncoder(std::vector<std::string> alphabet) : alphabet_(std::move(alphabet)) {}

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<std::string>& sort_decls() const { return sort_decls_; }

  // SMT sort text; records, options, and enums declare datatypes on demand.
  std::string sort_ref(const Sort& sort) {
    switch (sort.kind()) {
      case SortKind::Bool: return "Bool";
      case SortKind::Int: return "Int";
      case SortKind::BitVec: return "(_ BitVec " + std::to_string(sort.width()) + ")";
      case SortKind::StringSet:
        if (alphabet_.empty()) throw EmptyAlphabet();
        return "(_ BitVec " + std::to_string(alphabet_.size()) + ")";
      case SortKind::Enum:
      case SortKind::Option:
      case SortKind::Record:
        return datatype_for(sort).name;
    }
    throw Error("sort_ref: invalid sort");
  }

  // Declares a constant plus the well-formedness side conditions that keep
  // every reachable Int component nonnegative.
  std::vector<std::string> declare_const(const std::string& name, const Sort& sort) {
    std::vector<std::string> lines;
    lines.push_back("(declare-const " + symbol(name) + " " + sort_ref(sort) + ")");
    if (auto wf = wf_condition(sort, symbol(name))) lines.push_back("(assert " + *wf + ")");
    return lines;
  }

  std::string encode_value(const Value& v) {
    const Sort& sort = v.sort();
    switch (sort.kind()) {
      case SortKind::Bool: return v.as_bool() ? "true" : "false";
      case SortKind::Int: return std::to_string(v.as_int());
      case SortKind::BitVec:
        return "(_ bv" + std::to_string(v.as_bits()) + " " + std::to_string(sort.width()) + ")";
      case SortKind::Enum: {
        const auto& dt = datatype_for(sort);
        for (size_t i = 0; i < sort.labels().size(); ++i)
          if (sort.labels()[i] == v.as_label()) return dt.ctors[i];
        throw Error("enum label not found");
      }
      case SortKind::StringSet: {
        if (alphabet_.empty()) throw EmptyAlphabet();
        std::string bits(alphabet_.size(), '0');
        for (size_t i = 0; i < alphabet_.size(); ++i)
          if (v.as_strings().count(alphabet_[i])) bits[alphabet_.size() - 1 - i] = '1';
        return "#b" + bits;
      }
      case SortKind::Option: {
        const auto& dt = datatype_for(sort);
        if (v.is_none()) return "(as " + dt.ctors[0] + " " + dt.name + ")";
        return "(" + dt.ctors[1] + " " + encode_value(v.some_value()) + ")";
      }
      case SortKind::Record: {
        const auto& dt = datatype_for(sort);
        std::string out = "(" + dt.ctors[0];
        for (const auto& f : v.record_fields()) out += " " + encode_value(f);
        return out + ")";
      }
    }
    throw Error("encode_value: invalid sort");
  }

  struct Binding {
    std::string term;
    Sort sort;
  };
  using BindingEnv = std::map<std::string, Binding>;

  // Structural translation of a policy expression. Model evaluation of the
  // result agrees with eval_expr on every assignment.
  SolverTerm encode_expr(const Expr& e, const BindingEnv& env) {
    const auto& n = e.node();
    switch (n.kind) {
      case ExprKind::Literal:
        return {encode_value(*n.literal), n.literal->sort()};
      case ExprKind::Var: {
        auto it = env.find(n.name);
        if (it == env.end()) throw UnboundVar("$", n.name);
        return {it->second.term, it->second.sort};
      }
      case ExprKind::FieldGet: {
        SolverTerm rec = encode_expr(n.args[0], env);
        const auto& dt = datatype_for(rec.sort);
        int idx = rec.sort.field_index(n.name);
        if (idx < 0) throw Error("get: no field '" + n.name + "'");
        return {"(" + dt.selectors[static_cast<size_t>(idx)] + " " + rec.text + ")",
                rec.sort.fields()[static_cast<size_t>(idx)].second};
      }
      case ExprKind::RecordMake: {
        std::vector<std::pair<std::string, Sort>> field_sorts;
        std::string args;
        for (size_t i = 0; i < n.args.size(); ++i) {
          SolverTerm f = encode_expr(n.args[i], env);
          field_sorts.emplace_back(n.field_names[i], f.sort);
          args += " " + f.text;
        }
        Sort sort = Sort::record(std::move(field_sorts));
        return {"(" + datatype_for(sort).ctors[0] + args + ")", sort};
      }
      case ExprKind::RecordWith: {
        SolverTerm rec = encode_expr(n.args[0], env);
        SolverTerm val = encode_expr(n.args[1], env);
        const auto& dt = datatype_for(rec.sort);
        std::string bound = fresh("w");
        std::string body = "(" + dt.ctors[0];
        for (size_t i = 0; i < rec.sort.fields().size(); ++i) {
          if (rec.sort.fields()[i].first == n.name) body += " " + val.text;
          else body += " (" + dt.selectors[i] + " " + bound + ")";
        }
        body += ")";
        return {"(let ((" + bound + " " + rec.text + ")) " + body + ")", rec.sort};
      }
      case ExprKind::If: {
        SolverTerm c = encode_expr(n.args[0], env);
        SolverTerm a = encode_expr(n.args[1], env);
        SolverTerm b = encode_expr(n.args[2], env);
        return {"(ite " + c.text + " " + a.text + " " + b.text + ")", a.sort};
      }
      case ExprKind::And:
      case ExprKind::Or: {
        if (n.args.empty()) return {n.kind == ExprKind::And ? "true" : "false", Sort::boolean()};
        std::string out = n.kind == ExprKind::And ? "(and" : "(or";
        for (const auto& a : n.args) out += " " + encode_expr(a, env).text;
        return {out + ")", Sort::boolean()};
      }
      case ExprKind::Not:
        return {"(not " + encode_expr(n.args[0], env).text + ")", Sort::boolean()};
      case ExprKind::Eq:
      case ExprKind::Neq: {
        SolverTerm a = encode_expr(n.args[0], env);
        SolverTerm b = encode_expr(n.args[1], env);
        const char* op = n.kind == ExprKind::Eq ? "=" : "distinct";
        return {"(" + std::string(op) + " " + a.text + " " + b.text + ")", Sort::boolean()};
      }
      case ExprKind::Lt:
      case ExprKind::Leq: {
        SolverTerm a = encode_expr(n.args[0], env);
        SolverTerm b = encode_expr(n.args[1], env);
        bool ints = a.sort.is(SortKind::Int);
        const char* op = n.kind == ExprKind::Lt ? (ints ? "<" : "bvult") : (ints ? "<=" : "bvule");
        return {"(" + std::string(op) + " " + a.text + " " + b.text + ")", Sort::boolean()};
      }
      case ExprKind::Add: {
        SolverTerm a = encode_expr(n.args[0], env);
        SolverTerm b = encode_expr(n.args[1], env);
        const char* op = a.sort.is(SortKind::Int) ? "+" : "bvadd";
        return {"(" + std::string(op) + " " + a.text + " " + b.text + ")", a.sort};
      }
      case ExprKind::Sub: {
        SolverTerm a = encode_expr(n.args[0], env);
        SolverTerm b = encode_expr(n.args[1], env);
        if (!a.sort.is(SortKind::Int)) return {"(bvsub " + a.text + " " + b.text + ")", a.sort};
        // Saturating at 0, mirroring eval_expr.
        std::string av = fresh("a");
        std::string bv = fresh("b");
        return {"(let ((" + av + " " + a.text + ") (" + bv + " " + b.text + ")) (ite (<= " + bv +
                    " " + av + ") (- " + av + " " + bv + ") 0))",
                a.sort};
      }
      case ExprKind::Min:
      case ExprKind::Max: {
        SolverTerm a = encode_expr(n.args[0], env);
        SolverTerm b = encode_expr(n.args[1], env);
        bool ints = a.sort.is(SortKind::Int);
        std::string av = fresh("a");
        std::string bv = fresh("b");
        std::string le = ints ? "(<= " + av + " " + bv + ")" : "(bvule " + av + " " + bv + ")";
        std::string lo = n.kind == ExprKind::Min ? av : bv;
        std::string hi = n.kind == ExprKind::Min ? bv : av;
        return {"(let ((" + av + " " + a.text + ") (" + bv + " " + b.text + ")) (ite " + le + " " +
                    lo + " " + hi + "))",
                a.sort};
      }
      case ExprKind::SetContains: {
        SolverTerm s = encode_expr(n.args[0], env);
        int idx = alphabet_index(n.name);
        if (idx < 0) return {"false", Sort::boolean()};
        return {"(= ((_ extract " + std::to_string(idx) + " " + std::to_string(idx) + ") " + s.text +
                    ") #b1)",
                Sort::boolean()};
      }
      case ExprKind::SetInsert: {
        SolverTerm s = encode_expr(n.args[0], env);
        int idx = alphabet_index(n.name);
        if (idx < 0) throw Error("set literal '" + n.name + "' is outside the declared alphabet");
        std::string bits(alphabet_.size(), '0');
        bits[alphabet_.size() - 1 - static_cast<size_t>(idx)] = '1';
        return {"(bvor " + s.text + " #b" + bits + ")", Sort::string_set()};
      }
      case ExprKind::NoneLit: {
        Sort sort = Sort::option(*n.sort);
        const auto& dt = datatype_for(sort);
        return {"(as " + dt.ctors[0] + " " + dt.name + ")", sort};
      }
      case ExprKind::SomeWrap: {
        SolverTerm inner = encode_expr(n.args[0], env);
        Sort sort = Sort::option(inner.sort);
        return {"(" + datatype_for(sort).ctors[1] + " " + inner.text + ")", sort};
      }
      case ExprKind::OptionCase: {
        SolverTerm scrut = encode_expr(n.args[0], env);
        const auto& dt = datatype_for(scrut.sort);
        std::string bound = fresh("c");
        SolverTerm none_b = encode_expr(n.args[1], env);
        BindingEnv inner = env;
        inner[n.name] = {"(" + dt.selectors[0] + " " + bound + ")", scrut.sort.inner()};
        SolverTerm some_b = encode_expr(n.args[2], inner);
        return {"(let ((" + bound + " " + scrut.text + ")) (ite ((_ is " + dt.ctors[0] + ") " +
                    bound + ") " + none_b.text + " " + some_b.text + "))",
                none_b.sort};
      }
    }
    throw Error("encode_expr: invalid expression");
  }

  // Nonnegativity conditions for every Int reachable inside `term`.
  std::optional<std::string> wf_condition(const Sort& sort, const std::string& term) {
    switch (sort.kind()) {
      case SortKind::Int:
        return "(>= " + term + " 0)";
      case SortKind::Option: {
        const auto& dt = datatype_for(sort);
        auto inner = wf_condition(sort.inner(), "(" + dt.selectors[0] + " " + term + ")");
        if (!inner) return std::nullopt;
        return "(ite ((_ is " + dt.ctors[0] + ") " + term + ") true " + *inner + ")";
      }
      case SortKind::Record: {
        const auto& dt = datatype_for(sort);
        std::vector<std::string> parts;
        for (size_t i = 0; i < sort.fields().size(); ++i)
          if (auto c = wf_condition(sort.fields()[i].second, "(" + dt.selectors[i] + " " + term + ")"))
            parts.push_back(*c);
        if (parts.empty()) return std::nullopt;
        if (parts.size() == 1) return parts[0];
        std::string out = "(and";
        for (const auto& p : parts) out += " " + p;
        return out + ")";
      }
      default:
        return std::nullopt;
    }
  }

  // Lexicographic minimization objectives pinning a canonical model: options
  // prefer none, booleans false, numerics zero, enums their first label.
  // Objectives under an option are guarded so a none contributes a constant.
  void canonical_objectives(const Sort& sort, const std::string& term, std::vector<std::string>& out) {
    std::vector<Objective> objs;
    collect_objectives(sort, term, objs);
    for (auto& o : objs) out.push_back(std::move(o.term));
  }

  // --- model decoding ---

  Value decode_value(const Sort& sort, const Sexpr& sexp) {
    const Sexpr* s = &sexp;
    // Strip qualified-constructor wrappers: (as X SortName).
    while (!s->is_atom && s->items.size() == 3 && s->items[0].is_atom && s->items[0].atom == "as")
      s = &s->items[1];
    switch (sort.kind()) {
      case SortKind::Bool:
        if (s->is_atom && (s->atom == "true" || s->atom == "false"))
          return Value::boolean(s->atom == "true");
        throw MalformedModel(sexp.print());
      case SortKind::Int: {
        long long v = decode_integer(*s);
        if (v < 0) throw MalformedModel(sexp.print());
        return Value::integer(v);
      }
      case SortKind::BitVec:
        return Value::bitvec(sort, decode_bits_small(*s, sort.width()));
      case SortKind::Enum: {
        if (!s->is_atom) throw MalformedModel(sexp.print());
        const auto& dt = datatype_for(sort);
        for (size_t i = 0; i < dt.ctors.size(); ++i)
          if (dt.ctors[i] == s->atom) return Value::enum_label(sort, sort.labels()[i]);
        throw MalformedModel(sexp.print());
      }
      case SortKind::StringSet: {
        std::string bits = decode_bit_string(*s, alphabet_.size());
        std::set<std::string> elems;
        for (size_t i = 0; i < alphabet_.size(); ++i)
          if (bits[bits.size() - 1 - i] == '1') elems.insert(alphabet_[i]);
        return Value::string_set(std::move(elems));
      }
      case SortKind::Option: {
        const auto& dt = datatype_for(sort);
        if (s->is_atom && s->atom == dt.ctors[0]) return Value::none(sort);
        if (!s->is_atom && s->items.size() == 2 && s->items[0].is_atom && s->items[0].atom == dt.ctors[1])
          return Value::some(decode_value(sort.inner(), s->items[1]));
        throw MalformedModel(sexp.print());
      }
      case SortKind::Record: {
        const auto& dt = datatype_for(sort);
        if (s->is_atom || s->items.size() != sort.fields().size() + 1 || !s->items[0].is_atom ||
            s->items[0].atom != dt.ctors[0])
          throw MalformedModel(sexp.print());
        std::vector<Value> fields;
        for (size_t i = 0; i < sort.fields().size(); ++i)
          fields.push_back(decode_value(sort.fields()[i].second, s->items[i + 1]));
        return Value::record(sort, std::move(fields));
      }
    }
    throw MalformedModel(sexp.print());
  }

 private:
  struct Datatype {
    std::string name;
    std::vector<std::string> ctors;      // enum: one per label; option: none, some; record: mk
    std::vector<std::string> selectors;  // option: val; record: per field
  };

  struct Objective {
    std::string term;
    std::string zero;  // sort-correct constant used when an enclosing option is none
  };

  const Datatype& datatype_for(const Sort& sort) {
    std::string key = sort.to_string();
    auto it = datatypes_.find(key);
    if (it != datatypes_.end()) return it->second;

    Datatype dt;
    switch (sort.kind()) {
      case SortKind::Enum: {
        dt.name = "Enum" + std::to_string(counter_++);
        std::string decl = "(declare-datatypes ((" + dt.name + " 0)) ((";
        for (const auto& label : sort.labels()) {
          dt.ctors.push_back(symbol(dt.name + "!" + label));
          decl += "(" + dt.ctors.back() + ")";
        }
        decl += ")))";
        sort_decls_.push_back(decl);
        break;
      }
      case SortKind::Option: {
        std::string inner = sort_ref(sort.inner());  // declare dependencies first
        dt.name = "Opt" + std::to_string(counter_++);
        dt.ctors = {"none!" + dt.name, "some!" + dt.name};
        dt.selectors = {"val!" + dt.name};
        sort_decls_.push_back("(declare-datatypes ((" + dt.name + " 0)) (((" + dt.ctors[0] + ") (" +
                              dt.ctors[1] + " (" + dt.selectors[0] + " " + inner + ")))))");
        break;
      }
      case SortKind::Record: {
        std::vector<std::string> field_refs;
        for (const auto& [fname, fsort] : sort.fields()) field_refs.push_back(sort_ref(fsort));
        dt.name = "Rec" + std::to_string(counter_++);
        dt.ctors = {"mk!" + dt.name};
        std::string decl = "(declare-datatypes ((" + dt.name + " 0)) (((" + dt.ctors[0];
        for (size_t i = 0; i < sort.fields().size(); ++i) {
          dt.selectors.push_back(symbol(dt.name + "!" + sort.fields()[i].first));
          decl += " (" + dt.selectors.back() + " " + field_refs[i] + ")";
        }
        decl += "))))";
        sort_decls_.push_back(decl);
        break;
      }
      default:
        throw Error("datatype_for: not a datatype sort");
    }
    return datatypes_.emplace(std::move(key), std::move(dt)).first->second;
  }

  void collect_objectives(const Sort& sort, const std::string& term, std::vector<Objective>& out) {
    switch (sort.kind()) {
      case SortKind::Bool:
        out.push_back({"(ite " + term + " 1 0)", "0"});
        return;
      case SortKind::Int:
        out.push_back({term, "0"});
        return;
      case SortKind::BitVec:
        out.push_back({term, "(_ bv0 " + std::to_string(sort.width()) + ")"});
        return;
      case SortKind::StringSet:
        out.push_back({term, "(_ bv0 " + std::to_string(alphabet_.size()) + ")"});
        return;
      case SortKind::Enum: {
        const auto& dt = datatype_for(sort);
        std::string obj = std::to_string(dt.ctors.size() - 1);
        for (size_t i = dt.ctors.size() - 1; i-- > 0;)
          obj = "(ite ((_ is " + dt.ctors[i] + ") " + term + ") " + std::to_string(i) + " " + obj + ")";
        out.push_back({obj, "0"});
        return;
      }
      case SortKind::Option: {
        const auto& dt = datatype_for(sort);
        std::string is_none = "((_ is " + dt.ctors[0] + ") " + term + ")";
        out.push_back({"(ite " + is_none + " 0 1)", "0"});
        std::vector<Objective> inner;
        collect_objectives(sort.inner(), "(" + dt.selectors[0] + " " + term + ")", inner);
        for (const auto& o : inner)
          out.push_back({"(ite " + is_none + " " + o.zero + " " + o.term + ")", o.zero});
        return;
      }
      case SortKind::Record: {
        const auto& dt = datatype_for(sort);
        for (size_t i = 0; i < sort.fields().size(); ++i)
          collect_objectives(sort.fields()[i].second, "(" + dt.selectors[i] + " " + term + ")", out);
        return;
      }
    }
  }

  int alphabet_index(const std::string& elem) const {
    for (size_t i = 0; i < alphabet_.size(); ++i)
      if (alphabet_[i] == elem) return static_cast<int>(i);
    return -1;
  }

  std::string fresh(const char* prefix) { return std::string(prefix) + "!" + std::to_string(fresh_++); }

  static long long decode_integer(const Sexpr& s) {
    if (s.is_atom) {
      try {
        return std::stoll(s.atom);
      } catch (...) {
        throw MalformedModel(s.print());
      }
    }
    if (s.items.size() == 2 && s.items[0].is_atom && s.items[0].atom == "-")
      return -decode_integer(s.items[1]);
    throw MalformedModel(s.print());
  }

  static std::string decode_bit_string(const Sexpr& s, size_t width) {
    std::string bits;
    if (s.is_atom && s.atom.rfind("#b", 0) == 0) {
      bits = s.atom.substr(2);
    } else if (s.is_atom && s.atom.rfind("#x", 0) == 0) {
      for (size_t i = 2; i < s.atom.size(); ++i) {
        char c = s.atom[i];
        int v = c >= 'a' ? c - 'a' + 10 : (c >= 'A' ? c - 'A' + 10 : c - '0');
        for (int b = 3; b >= 0; --b) bits += ((v >> b) & 1) ? '1' : '0';
      }
    } else if (!s.is_atom && s.items.size() == 3 && s.items[0].is_atom && s.items[0].atom == "_" &&
               s.items[1].is_atom && s.items[1].atom.rfind("bv", 0) == 0) {
      unsigned long long v = 0;
      size_t w = 0;
      try {
        v = std::stoull(s.items[1].atom.substr(2));
        w = std::stoull(s.items[2].atom);
      } catch (...) {
        throw MalformedModel(s.print());
      }
      for (size_t i = 0; i < w; ++i) bits += ((v >> (w - 1 - i)) & 1) ? '1' : '0';
    } else {
      throw MalformedModel(s.print());
    }
    if (bits.size() < width) bits = std::string(width - bits.size(), '0') + bits;
    if (bits.size() != width) throw MalformedModel(s.print());
    return bits;
  }

  static std::uint64_t decode_bits_small(const Sexpr& s, unsigned width) {
    std::string bits = decode_bit_string(s, width);
    std::uint64_t v = 0;
    for (char c : bits) v = (v << 1) | (c == '1' ? 1u : 0u);
    return v;
  }

  std::vector<std::string> alphabet_;
  std::map<std::string, Datatype> datatypes_;
  std::vector<std::string> sort_decls_;
  int counter_ = 0;
  int fresh_ = 0;
};

}  // namespace lockstep::smt
