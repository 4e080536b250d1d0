#pragma once

#include <string>
#include <vector>

#include "lockstep/errors.hpp"

namespace lockstep::smt {

// Minimal S-expression tree for solver output and round-trip checks.
struct Sexpr {
  bool is_atom = true;
  std::string atom;
  std::vector<Sexpr> items;

  static Sexpr make_atom(std::string text) {
    Sexpr s;
    s.is_atom = true;
    s.atom = std::move(text);
    return s;
  }
  static Sexpr make_list(std::vector<Sexpr> items) {
    Sexpr s;
    s.is_atom = false;
    s.items = std::move(items);
    return s;
  }

  std::string print() const {
    if (is_atom) return atom;
    std::string out = "(";
    for (size_t i = 0; i < items.size(); ++i) out += (i ? " " : "") + items[i].print();
    return out + ")";
  }
};

namespace detail {

inline void skip_ws(const std::string& text, size_t& pos) {
  while (pos < text.size()) {
    char c = text[pos];
    if (c == ';') {  // line comment
      while (pos < text.size() && text[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++pos;
    } else {
      return;
    }
  }
}

inline Sexpr parse_one(const std::string& text, size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size()) throw MalformedModel("unexpected end of solver output");
  char c = text[pos];
  if (c == '(') {
    ++pos;
    std::vector<Sexpr> items;
    while (true) {
      skip_ws(text, pos);
      if (pos >= text.size()) throw MalformedModel("unterminated list");
      if (text[pos] == ')') {
        ++pos;
        return Sexpr::make_list(std::move(items));
      }
      items.push_back(parse_one(text, pos));
    }
  }
  if (c == ')') throw MalformedModel("unexpected ')'");
  if (c == '"') {  // string literal
    size_t start = pos++;
    while (pos < text.size()) {
      if (text[pos] == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') pos += 2;  // escaped quote
        else break;
      } else {
        ++pos;
      }
    }
    if (pos >= text.size()) throw MalformedModel("unterminated string");
    ++pos;
    return Sexpr::make_atom(text.substr(start, pos - start));
  }
  if (c == '|') {  // quoted symbol
    size_t start = pos++;
    while (pos < text.size() && text[pos] != '|') ++pos;
    if (pos >= text.size()) throw MalformedModel("unterminated quoted symbol");
    ++pos;
    return Sexpr::make_atom(text.substr(start, pos - start));
  }
  size_t start = pos;
  while (pos < text.size()) {
    char d = text[pos];
    if (d == '(' || d == ')' || d == ' ' || d == '\t' || d == '\n' || d == '\r' || d == ';') break;
    ++pos;
  }
  return Sexpr::make_atom(text.substr(start, pos - start));
}

}  // namespace detail

inline std::vector<Sexpr> parse_sexprs(const std::string& text) {
  std::vector<Sexpr> out;
  size_t pos = 0;
  while (true) {
    detail::skip_ws(text, pos);
    if (pos >= text.size()) return out;
    out.push_back(detail::parse_one(text, pos));
  }
}

}  // namespace lockstep::smt
