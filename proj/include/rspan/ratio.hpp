#ifndef RSPAN_RATIO_HPP
#define RSPAN_RATIO_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rspan/error.hpp"

namespace rspan {

/// Exact nonnegative rational used for density thresholds.
///
/// Threshold tests such as |I ∩ B| >= alpha * |I| are evaluated as
/// |I ∩ B| * den >= num * |I| in 128-bit integers, so membership never
/// depends on floating-point rounding.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Ratio() = default;
  constexpr Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den <= 0) throw Error("ratio denominator must be positive");
    if (num < 0) throw Error("ratio must be nonnegative");
    auto g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  /// Best rational approximation by continued fractions. Decimal inputs
  /// such as 0.4 or 1.0/96 come back as 2/5 and 1/96.
  static Ratio approx(double x, std::int64_t max_den = std::int64_t{1} << 40) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error("ratio must be a finite nonnegative number");
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
      double a = std::floor(r);
      if (a > 9.0e15) break;
      auto ai = static_cast<std::int64_t>(a);
      __int128 p2 = static_cast<__int128>(ai) * p1 + p0;
      __int128 q2 = static_cast<__int128>(ai) * q1 + q0;
      if (q2 > max_den || p2 > (std::int64_t{1} << 62)) break;
      p0 = p1;
      q0 = q1;
      p1 = static_cast<std::int64_t>(p2);
      q1 = static_cast<std::int64_t>(q2);
      double approx_val = static_cast<double>(p1) / static_cast<double>(q1);
      if (std::fabs(approx_val - x) <= 1e-15 * std::max(1.0, x)) break;
      double frac = r - a;
      if (frac <= 0.0) break;
      r = 1.0 / frac;
    }
    if (q1 == 0) throw Error("ratio approximation failed");
    return Ratio(p1, q1);
  }

  /// Parses "p/q" exactly or a decimal through approx().
  static Ratio parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
      if (slash != std::string::npos) {
        return Ratio(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
      }
      return approx(std::stod(s));
    } catch (const std::logic_error&) {
      throw Error("cannot parse ratio '" + s + "'");
    }
  }

  [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  /// count >= this * total
  [[nodiscard]] bool at_most_fraction_of(std::int64_t count, std::int64_t total) const {
    return static_cast<__int128>(count) * den >= static_cast<__int128>(num) * total;
  }

  /// Smallest integer m with m >= this * total.
  [[nodiscard]] std::int64_t ceil_times(std::int64_t total) const {
    __int128 prod = static_cast<__int128>(num) * total;
    return static_cast<std::int64_t>((prod + den - 1) / den);
  }

  /// ceil(1 / this)
  [[nodiscard]] std::int64_t ceil_inverse() const {
    if (num == 0) throw Error("inverse of zero ratio");
    return (den + num - 1) / num;
  }

  [[nodiscard]] std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Ratio& a, const Ratio& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
};

/// 1 - r, for r <= 1.
inline Ratio one_minus(const Ratio& r) {
  if (r.num > r.den) throw Error("one_minus of ratio above one");
  return Ratio(r.den - r.num, r.den);
}

inline Ratio operator/(const Ratio& r, std::int64_t k) {
  if (k <= 0) throw Error("ratio divisor must be positive");
  return Ratio(r.num, r.den * k);
}

}  // namespace rspan

#endif  // RSPAN_RATIO_HPP
