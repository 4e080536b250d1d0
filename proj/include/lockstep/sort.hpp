#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lockstep/errors.hpp"

namespace lockstep {

enum class SortKind { Bool, Int, BitVec, Enum, StringSet, Option, Record };

struct SortNode;

// Immutable, structurally-compared value sort. Cheap to copy (shared node).
class Sort {
 public:
  Sort() = default;

  static Sort boolean();
  static Sort integer();
  static Sort bitvec(unsigned width);
  static Sort enumeration(std::vector<std::string> labels);
  static Sort string_set();
  static Sort option(Sort inner);
  static Sort record(std::vector<std::pair<std::string, Sort>> fields);

  SortKind kind() const;
  unsigned width() const;  // BitVec
  const std::vector<std::string>& labels() const;  // Enum
  const Sort& inner() const;  // Option
  const std::vector<std::pair<std::string, Sort>>& fields() const;  // Record

  bool valid() const { return node_ != nullptr; }
  bool is(SortKind k) const { return valid() && kind() == k; }
  const Sort* field_sort(const std::string& name) const;  // nullptr if absent
  int field_index(const std::string& name) const;  // -1 if absent

  bool operator==(const Sort& other) const;
  bool operator!=(const Sort& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  explicit Sort(std::shared_ptr<const SortNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const SortNode> node_;
};

struct SortNode {
  SortKind kind;
  unsigned width = 0;
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, Sort>> fields;
  std::vector<Sort> inner;  // singleton for Option
};

inline Sort Sort::boolean() {
  static const Sort s{std::make_shared<SortNode>(SortNode{SortKind::Bool, 0, {}, {}, {}})};
  return s;
}

inline Sort Sort::integer() {
  static const Sort s{std::make_shared<SortNode>(SortNode{SortKind::Int, 0, {}, {}, {}})};
  return s;
}

inline Sort Sort::bitvec(unsigned width) {
  if (width == 0 || width > 64)
    throw Error("bitvec width must be in 1..64, got " + std::to_string(width));
  return Sort{std::make_shared<SortNode>(SortNode{SortKind::BitVec, width, {}, {}, {}})};
}

inline Sort Sort::enumeration(std::vector<std::string> labels) {
  if (labels.empty()) throw Error("enum sort needs at least one label");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw Error("enum label must be nonempty");
    if (!seen.insert(l).second) throw Error("duplicate enum label '" + l + "'");
  }
  return Sort{std::make_shared<SortNode>(SortNode{SortKind::Enum, 0, std::move(labels), {}, {}})};
}

inline Sort Sort::string_set() {
  static const Sort s{std::make_shared<SortNode>(SortNode{SortKind::StringSet, 0, {}, {}, {}})};
  return s;
}

inline Sort Sort::option(Sort inner) {
  if (!inner.valid()) throw Error("option sort needs an inner sort");
  return Sort{std::make_shared<SortNode>(SortNode{SortKind::Option, 0, {}, {}, {std::move(inner)}})};
}

inline Sort Sort::record(std::vector<std::pair<std::string, Sort>> fields) {
  std::set<std::string> seen;
  for (const auto& [name, sort] : fields) {
    if (!sort.valid()) throw Error("record field '" + name + "' needs a sort");
    if (!seen.insert(name).second) throw Error("duplicate record field '" + name + "'");
  }
  return Sort{std::make_shared<SortNode>(SortNode{SortKind::Record, 0, {}, std::move(fields), {}})};
}

inline SortKind Sort::kind() const { return node_->kind; }
inline unsigned Sort::width() const { return node_->width; }
inline const std::vector<std::string>& Sort::labels() const { return node_->labels; }
inline const Sort& Sort::inner() const { return node_->inner.front(); }
inline const std::vector<std::pair<std::string, Sort>>& Sort::fields() const { return node_->fields; }

inline const Sort* Sort::field_sort(const std::string& name) const {
  for (const auto& [n, s] : node_->fields)
    if (n == name) return &s;
  return nullptr;
}

inline int Sort::field_index(const std::string& name) const {
  for (size_t i = 0; i < node_->fields.size(); ++i)
    if (node_->fields[i].first == name) return static_cast<int>(i);
  return -1;
}

inline bool Sort::operator==(const Sort& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  const SortNode& a = *node_;
  const SortNode& b = *other.node_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SortKind::Bool:
    case SortKind::Int:
    case SortKind::StringSet:
      return true;
    case SortKind::BitVec:
      return a.width == b.width;
    case SortKind::Enum:
      return a.labels == b.labels;
    case SortKind::Option:
      return a.inner.front() == b.inner.front();
    case SortKind::Record:
      if (a.fields.size() != b.fields.size()) return false;
      for (size_t i = 0; i < a.fields.size(); ++i)
        if (a.fields[i].first != b.fields[i].first || !(a.fields[i].second == b.fields[i].second))
          return false;
      return true;
  }
  return false;
}

inline std::string Sort::to_string() const {
  if (!valid()) return "<invalid>";
  switch (kind()) {
    case SortKind::Bool: return "bool";
    case SortKind::Int: return "int";
    case SortKind::BitVec: return "bitvec(" + std::to_string(width()) + ")";
    case SortKind::StringSet: return "stringset";
    case SortKind::Enum: {
      std::string out = "enum(";
      for (size_t i = 0; i < labels().size(); ++i) out += (i ? "," : "") + labels()[i];
      return out + ")";
    }
    case SortKind::Option: return "option(" + inner().to_string() + ")";
    case SortKind::Record: {
      std::string out = "record(";
      for (size_t i = 0; i < fields().size(); ++i)
        out += (i ? "," : "") + fields()[i].first + ":" + fields()[i].second.to_string();
      return out + ")";
    }
  }
  return "<invalid>";
}

}  // namespace lockstep
