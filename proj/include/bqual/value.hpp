#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace bqual {

enum class ValueKind : std::uint8_t { integer = 0, boolean = 1, enumerated = 2 };

/// A machine-domain value: an integer, a boolean, or an element of an enumerated set.
///
/// Values are 16 bytes. Enumerated elements are interned process-wide, so equality is a
/// plain payload comparison while ordering still follows (set name, element name).
class Value {
 public:
  constexpr Value() = default;

  static constexpr Value integer(std::int64_t v) { return Value(ValueKind::integer, v); }
  static constexpr Value boolean(bool v) { return Value(ValueKind::boolean, v ? 1 : 0); }
  static Value enumerated(std::string_view set, std::string_view element);

  constexpr ValueKind kind() const noexcept { return kind_; }
  constexpr bool is_integer() const noexcept { return kind_ == ValueKind::integer; }
  constexpr bool is_boolean() const noexcept { return kind_ == ValueKind::boolean; }
  constexpr bool is_enumerated() const noexcept { return kind_ == ValueKind::enumerated; }

  std::int64_t as_integer() const;
  bool as_boolean() const;
  std::string_view enum_set() const;
  std::string_view enum_element() const;

  /// B surface syntax: `42`, `TRUE`, `red`.
  std::string to_string() const;

  constexpr bool operator==(const Value&) const = default;
  std::strong_ordering operator<=>(const Value& other) const;

  std::size_t hash() const noexcept;

 private:
  constexpr Value(ValueKind kind, std::int64_t payload) : kind_(kind), payload_(payload) {}

  ValueKind kind_ = ValueKind::integer;
  std::int64_t payload_ = 0;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept { return v.hash(); }
};

std::string_view to_string(ValueKind kind);

}  // namespace bqual
