#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace spectral_walks {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always stored reduced with a positive denominator. Intermediate products
/// are formed in 128 bits; a result that does not fit back into 64 bits
/// throws std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }
  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Exact conversion of a binary double, if its reduced form fits.
  static std::optional<Rational> exact_from_double(double x);

  friend Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const __int128 n = static_cast<__int128>(a.num_) * (b.den_ / g) +
                       static_cast<__int128>(b.num_) * (a.den_ / g);
    const __int128 d = static_cast<__int128>(a.den_ / g) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational& a) { return from_wide(-static_cast<__int128>(a.num_), a.den_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const __int128 n = static_cast<__int128>(a.num_ / (g1 ? g1 : 1)) * (b.num_ / (g2 ? g2 : 1));
    const __int128 d = static_cast<__int128>(a.den_ / (g2 ? g2 : 1)) * (b.den_ / (g1 ? g1 : 1));
    return from_wide(n, d);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return a * Rational(b.den_, b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

  static Rational from_wide(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational conj_value(const Rational& r) { return r; }
inline double to_double(const Rational& r) { return r.to_double(); }

}  // namespace spectral_walks
