#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace bqual {

/// Exact non-negative-or-signed rational. Always kept in lowest terms.
class Ratio {
 public:
  using Value = boost::multiprecision::cpp_rational;

  Ratio() = default;
  Ratio(std::int64_t value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  /// Throws MetricError when `den` is zero.
  Ratio(std::int64_t num, std::int64_t den);
  explicit Ratio(Value value) : value_(std::move(value)) {}

  /// num / den over counts; throws MetricError naming `what` when den is zero.
  static Ratio of(std::uint64_t num, std::uint64_t den, const std::string& what = "ratio");
  /// Parses "a/b" or "a".
  static Ratio parse(const std::string& text);

  const Value& value() const noexcept { return value_; }
  std::string numerator() const;
  std::string denominator() const;

  /// "697/720", or "1" for integers.
  std::string exact() const;
  /// Decimal with `digits` fractional digits, rounded half away from zero.
  std::string decimal(int digits = 3) const;
  double to_double() const;

  friend Ratio operator+(const Ratio& a, const Ratio& b) { return Ratio(Value(a.value_ + b.value_)); }
  friend Ratio operator-(const Ratio& a, const Ratio& b) { return Ratio(Value(a.value_ - b.value_)); }
  friend Ratio operator*(const Ratio& a, const Ratio& b) { return Ratio(Value(a.value_ * b.value_)); }
  friend Ratio operator/(const Ratio& a, const Ratio& b);
  Ratio& operator+=(const Ratio& other) {
    value_ += other.value_;
    return *this;
  }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Value value_{0};
};

}  // namespace bqual
