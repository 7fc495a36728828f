#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cspoly {

namespace detail {

inline std::int64_t checked_i64(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error(what);
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

/// An exact rational fraction of a full turn: the angle 2*pi*num/den.
///
/// Always stored reduced with 0 <= num < den, so equality of angles is exact
/// integer equality. All structural decisions (antipodality, grid fibers,
/// cluster membership) are made on these rationals; floating point enters
/// only when a coordinate is finally evaluated.
class Angle {
 public:
  Angle() = default;

  Angle(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw std::invalid_argument("Angle: denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  /// The angle plus half a turn. Always exact.
  Angle antipode() const { return plus(Angle(1, 2)); }

  /// f * angle mod one turn, exact. Requires f >= 0.
  Angle times(std::int64_t f) const {
    if (f < 0) throw std::invalid_argument("Angle::times: negative multiplier");
    const __int128 n = static_cast<__int128>(f) * num_ % den_;
    return Angle(static_cast<std::int64_t>(n), den_);
  }

  /// Exact rational sum mod one turn. Reduction happens in 128-bit
  /// intermediates so desk-scale grids never overflow.
  Angle plus(const Angle& o) const {
    const __int128 d = static_cast<__int128>(den_) * o.den_;
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    n %= d;
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    const __int128 g = a == 0 ? 1 : a;
    return Angle(detail::checked_i64(n / g, "Angle::plus numerator overflow"),
                 detail::checked_i64(d / g, "Angle::plus denominator overflow"));
  }

  double radians() const {
    return 2.0 * std::numbers::pi * (static_cast<double>(num_) / static_cast<double>(den_));
  }

  /// True iff the angle lies in [0, half a turn): 2*num < den.
  bool in_first_half() const { return 2 * static_cast<__int128>(num_) < den_; }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  bool operator==(const Angle& o) const { return num_ == o.num_ && den_ == o.den_; }

  std::strong_ordering operator<=>(const Angle& o) const {
    const __int128 lhs = static_cast<__int128>(num_) * o.den_;
    const __int128 rhs = static_cast<__int128>(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// cos/sin of a rational fraction of a turn, with the quarter-turn symmetry
/// applied exactly: the fraction is reduced, scaled to a denominator divisible
/// by 4, and rotated into the first quarter by exact integer arithmetic before
/// any floating-point trigonometry. Antipodal inputs therefore produce
/// bit-exact negations, and quarter-turn multiples produce exact 0/±1.
inline std::array<double, 2> trig_turn(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("trig_turn: denominator must be positive");
  num %= den;
  if (num < 0) num += den;
  const std::int64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  while (den % 4 != 0) {
    num = detail::checked_i64(static_cast<__int128>(num) * 2, "trig_turn overflow");
    den = detail::checked_i64(static_cast<__int128>(den) * 2, "trig_turn overflow");
  }
  const std::int64_t quarter = den / 4;
  const int rot = static_cast<int>(num / quarter);
  const std::int64_t rem = num % quarter;
  const double theta =
      2.0 * std::numbers::pi * (static_cast<double>(rem) / static_cast<double>(den));
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  switch (rot & 3) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

inline std::array<double, 2> trig_turn(const Angle& a) { return trig_turn(a.num(), a.den()); }

}  // namespace cspoly
