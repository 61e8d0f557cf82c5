#include "bqual/rational.hpp"

#include "bqual/errors.hpp"

namespace bqual {

namespace mp = boost::multiprecision;

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw MetricError("zero denominator");
  value_ = Value(mp::cpp_int(num), mp::cpp_int(den));
}

Ratio Ratio::of(std::uint64_t num, std::uint64_t den, const std::string& what) {
  if (den == 0) throw MetricError(what + ": empty denominator");
  return Ratio(Value(mp::cpp_int(num), mp::cpp_int(den)));
}

Ratio Ratio::parse(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Ratio(Value(mp::cpp_int(text)));
    mp::cpp_int num(text.substr(0, slash));
    mp::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw MetricError("zero denominator in '" + text + "'");
    return Ratio(Value(num, den));
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const MetricError*>(&e) != nullptr) throw;
    throw InputError("not a rational: '" + text + "'");
  }
}

Ratio operator/(const Ratio& a, const Ratio& b) {
  if (b.value_ == 0) throw MetricError("division by zero");
  return Ratio(Ratio::Value(a.value_ / b.value_));
}

std::string Ratio::numerator() const { return mp::numerator(value_).str(); }
std::string Ratio::denominator() const { return mp::denominator(value_).str(); }

std::string Ratio::exact() const {
  auto den = mp::denominator(value_);
  if (den == 1) return numerator();
  return numerator() + "/" + den.str();
}

std::string Ratio::decimal(int digits) const {
  mp::cpp_int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mp::cpp_int num = mp::numerator(value_);
  const mp::cpp_int den = mp::denominator(value_);
  const bool negative = num < 0;
  if (negative) num = -num;
  // round(|x| * scale) half up
  mp::cpp_int scaled = (2 * num * scale + den) / (2 * den);
  std::string text = scaled.str();
  if (digits > 0) {
    if (text.size() <= static_cast<std::size_t>(digits)) {
      text.insert(0, static_cast<std::size_t>(digits) + 1 - text.size(), '0');
    }
    text.insert(text.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && scaled != 0) text.insert(0, "-");
  return text;
}

double Ratio::to_double() const { return value_.convert_to<double>(); }

}  // namespace bqual
