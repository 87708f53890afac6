#include "spectral_walks/rational.hpp"

#include <cmath>
#include <limits>

namespace spectral_walks {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

}  // namespace

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n > kMax || n < -kMax || d > kMax) throw std::overflow_error("Rational: 64-bit overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

std::optional<Rational> Rational::exact_from_double(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // x = mant * 2^exp with 0.5 <= |mant| < 1; scale mantissa to an integer.
  std::int64_t m = 0;
  int shift = 0;
  while (mant != std::trunc(mant)) {
    mant *= 2.0;
    ++shift;
    if (shift > 60) return std::nullopt;
  }
  m = static_cast<std::int64_t>(mant);
  exp -= shift;
  if (exp >= 0) {
    if (exp > 62) return std::nullopt;
    const __int128 n = static_cast<__int128>(m) << exp;
    if (n > kMax || n < -kMax) return std::nullopt;
    return Rational(static_cast<std::int64_t>(n));
  }
  if (-exp > 62) return std::nullopt;
  return Rational(m, std::int64_t{1} << -exp);
}

}  // namespace spectral_walks
