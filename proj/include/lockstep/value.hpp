#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lockstep/sort.hpp"

namespace lockstep {

// A concrete inhabitant of a Sort. Immutable; structural equality.
class Value {
 public:
  Value() = default;

  static Value boolean(bool b) {
    Value v(Sort::boolean());
    v.bool_ = b;
    return v;
  }

  // Int values are nonnegative throughout the model; saturating subtraction
  // keeps evaluation inside that domain and the solver side mirrors it.
  static Value integer(long long i) {
    if (i < 0) throw Error("int value must be nonnegative, got " + std::to_string(i));
    Value v(Sort::integer());
    v.int_ = i;
    return v;
  }

  static Value bitvec(const Sort& sort, std::uint64_t bits) {
    if (!sort.is(SortKind::BitVec)) throw Error("bitvec value needs a bitvec sort");
    Value v(sort);
    v.bits_ = bits & mask(sort.width());
    return v;
  }

  static Value bitvec(unsigned width, std::uint64_t bits) { return bitvec(Sort::bitvec(width), bits); }

  static Value enum_label(const Sort& sort, const std::string& label) {
    if (!sort.is(SortKind::Enum)) throw Error("enum value needs an enum sort");
    for (const auto& l : sort.labels())
      if (l == label) {
        Value v(sort);
        v.label_ = label;
        return v;
      }
    throw Error("label '" + label + "' is not in " + sort.to_string());
  }

  static Value string_set(std::set<std::string> elems) {
    Value v(Sort::string_set());
    v.strings_ = std::move(elems);
    return v;
  }

  static Value none(const Sort& option_sort) {
    if (!option_sort.is(SortKind::Option)) throw Error("none needs an option sort");
    return Value(option_sort);
  }

  static Value some(Value inner) {
    Value v(Sort::option(inner.sort()));
    v.some_ = std::make_shared<Value>(std::move(inner));
    return v;
  }

  static Value record(const Sort& sort, std::vector<Value> fields) {
    if (!sort.is(SortKind::Record)) throw Error("record value needs a record sort");
    if (fields.size() != sort.fields().size())
      throw Error("record value arity mismatch for " + sort.to_string());
    for (size_t i = 0; i < fields.size(); ++i)
      if (fields[i].sort() != sort.fields()[i].second)
        throw Error("record field '" + sort.fields()[i].first + "' sort mismatch");
    Value v(sort);
    v.fields_ = std::move(fields);
    return v;
  }

  const Sort& sort() const { return sort_; }

  bool as_bool() const { return bool_; }
  long long as_int() const { return int_; }
  std::uint64_t as_bits() const { return bits_; }
  const std::string& as_label() const { return label_; }
  const std::set<std::string>& as_strings() const { return strings_; }
  bool is_none() const { return some_ == nullptr; }
  const Value& some_value() const { return *some_; }
  const std::vector<Value>& record_fields() const { return fields_; }

  const Value& field(const std::string& name) const {
    int idx = sort_.field_index(name);
    if (idx < 0) throw Error("no field '" + name + "' in " + sort_.to_string());
    return fields_[static_cast<size_t>(idx)];
  }

  bool operator==(const Value& other) const {
    if (sort_ != other.sort_) return false;
    switch (sort_.kind()) {
      case SortKind::Bool: return bool_ == other.bool_;
      case SortKind::Int: return int_ == other.int_;
      case SortKind::BitVec: return bits_ == other.bits_;
      case SortKind::Enum: return label_ == other.label_;
      case SortKind::StringSet: return strings_ == other.strings_;
      case SortKind::Option:
        if (is_none() != other.is_none()) return false;
        return is_none() || *some_ == *other.some_;
      case SortKind::Record: return fields_ == other.fields_;
    }
    return false;
  }
  bool operator!=(const Value& other) const { return !(*this == other); }

  // Compact single-line rendering: records as <a,b,c>, absent routes as ~.
  std::string render() const {
    switch (sort_.kind()) {
      case SortKind::Bool: return bool_ ? "true" : "false";
      case SortKind::Int: return std::to_string(int_);
      case SortKind::BitVec: return std::to_string(bits_);
      case SortKind::Enum: return label_;
      case SortKind::StringSet: {
        std::string out = "{";
        bool first = true;
        for (const auto& s : strings_) {
          if (!first) out += ",";
          out += s;
          first = false;
        }
        return out + "}";
      }
      case SortKind::Option:
        if (is_none()) return "~";
        // Disambiguate nested options only; plain routes read as their payload.
        if (some_->sort().is(SortKind::Option)) return "some(" + some_->render() + ")";
        return some_->render();
      case SortKind::Record: {
        std::string out = "<";
        for (size_t i = 0; i < fields_.size(); ++i) out += (i ? "," : "") + fields_[i].render();
        return out + ">";
      }
    }
    return "?";
  }

  // Canonical "zero" of a sort; used to complete partial solver models.
  static Value default_of(const Sort& sort) {
    switch (sort.kind()) {
      case SortKind::Bool: return boolean(false);
      case SortKind::Int: return integer(0);
      case SortKind::BitVec: return bitvec(sort, 0);
      case SortKind::Enum: return enum_label(sort, sort.labels().front());
      case SortKind::StringSet: return string_set({});
      case SortKind::Option: return none(sort);
      case SortKind::Record: {
        std::vector<Value> fields;
        fields.reserve(sort.fields().size());
        for (const auto& [name, fsort] : sort.fields()) fields.push_back(default_of(fsort));
        return record(sort, std::move(fields));
      }
    }
    throw Error("default_of: invalid sort");
  }

  static std::uint64_t mask(unsigned width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
  }

 private:
  explicit Value(Sort sort) : sort_(std::move(sort)) {}

  Sort sort_;
  bool bool_ = false;
  long long int_ = 0;
  std::uint64_t bits_ = 0;
  std::string label_;
  std::set<std::string> strings_;
  std::shared_ptr<const Value> some_;
  std::vector<Value> fields_;
};

}  // namespace lockstep
