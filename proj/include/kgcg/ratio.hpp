#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "kgcg/error.hpp"

namespace kgcg {

using BigInt = boost::multiprecision::cpp_int;

/// Exact non-negative rational. Always kept in lowest terms with a positive
/// denominator; decimals are produced only by render().
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::uint64_t numerator, std::uint64_t denominator)
      : Ratio(BigInt(numerator), BigInt(denominator)) {}
  Ratio(const BigInt& numerator, const BigInt& denominator) {
    if (denominator <= 0) throw MetricError("ratio with non-positive denominator");
    if (numerator < 0) throw MetricError("ratio with negative numerator");
    value_ = boost::multiprecision::cpp_rational(numerator, denominator);
  }

  static Ratio zero() { return Ratio(); }
  static Ratio one() { return Ratio(1, 1); }

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }
  bool is_zero() const { return value_ == 0; }

  Ratio& operator+=(const Ratio& other) {
    value_ += other.value_;
    return *this;
  }
  friend Ratio operator+(Ratio a, const Ratio& b) { return a += b; }

  // Division by a positive count; used for averaging.
  Ratio divided_by(std::uint64_t count) const {
    if (count == 0) throw MetricError("division of ratio by zero");
    Ratio r;
    r.value_ = value_ / BigInt(count);
    return r;
  }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  double to_double() const { return value_.convert_to<double>(); }

  // "n/d" form, e.g. "7/8"; zero is "0/1".
  std::string exact() const { return numerator().str() + "/" + denominator().str(); }

  /// Decimal string with exactly `places` fractional digits, rounded
  /// half-to-even on the exact value.
  std::string render(int places = 4) const {
    if (places < 0) places = 0;
    BigInt scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const BigInt num = numerator() * scale;
    const BigInt den = denominator();
    BigInt q = num / den;
    const BigInt rem = num % den;
    const BigInt twice = rem * 2;
    if (twice > den || (twice == den && (q % 2) == 1)) q += 1;
    std::string digits = q.str();
    if (places == 0) return digits;
    if (digits.size() <= static_cast<std::size_t>(places))
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(places), 1, '.');
    return digits;
  }

  friend std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.exact(); }

 private:
  boost::multiprecision::cpp_rational value_{0};
};

// Parses "n/d" (as produced by Ratio::exact()).
inline Ratio parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == text.size())
    throw ConfigError("malformed ratio '" + text + "'");
  for (std::size_t i = 0; i < text.size(); ++i)
    if (i != slash && (text[i] < '0' || text[i] > '9'))
      throw ConfigError("malformed ratio '" + text + "'");
  return Ratio(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
}

}  // namespace kgcg
