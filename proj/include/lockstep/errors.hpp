#pragma once

#include <stdexcept>
#include <string>

namespace lockstep {

// Base for all library errors so callers can catch one type at the CLI edge.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Ill-sorted expression. `path` is a breadcrumb into the offending subterm.
class SortError : public Error {
 public:
  SortError(std::string path, std::string expected, std::string found)
      : Error("sort error at " + path + ": expected " + expected + ", found " + found),
        path(std::move(path)),
        expected(std::move(expected)),
        found(std::move(found)) {}
  std::string path;
  std::string expected;
  std::string found;
};

class UnboundVar : public Error {
 public:
  UnboundVar(std::string path, std::string name)
      : Error("unbound variable '" + name + "' at " + path), path(std::move(path)), name(std::move(name)) {}
  std::string path;
  std::string name;
};

// Structured-text input rejected. `where` is a JSON-pointer-ish location.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& message)
      : Error("parse error at " + where + ": " + message), where(std::move(where)) {}
  std::string where;
};

class NotClosed : public Error {
 public:
  explicit NotClosed(const std::string& detail) : Error("network is not closed: " + detail) {}
};

class NotConverged : public Error {
 public:
  NotConverged() : Error("simulation trace did not converge") {}
};

class UnsupportedShape : public Error {
 public:
  explicit UnsupportedShape(const std::string& detail)
      : Error("temporal operator shape unsupported here: " + detail) {}
};

class NonGloballyInterface : public Error {
 public:
  explicit NonGloballyInterface(const std::string& node)
      : Error("node '" + node + "' has a timed interface; the stable-state check needs globally-only shapes") {}
};

class EmptyAlphabet : public Error {
 public:
  EmptyAlphabet() : Error("string-set sort used but the network declares no string literals") {}
};

class MalformedModel : public Error {
 public:
  explicit MalformedModel(const std::string& fragment)
      : Error("cannot decode solver model fragment: " + fragment), fragment(fragment) {}
  std::string fragment;
};

}  // namespace lockstep
