#pragma once

// Trigonometric polynomials on the circle R/Z with basis
// e_k(t) = exp(-2πikt), stored as sparse coefficient maps.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <map>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "spectral_walks/rational.hpp"
#include "spectral_walks/summation.hpp"

namespace spectral_walks {

/// e_k(t) = exp(-2πikt), with k·t reduced modulo 1 before the exponential.
inline std::complex<double> basis_value(long long k, double t) {
  const double phase = static_cast<double>(k) * t;
  const double frac = phase - std::floor(phase);
  return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

/// Finite Fourier series Σ c_k e_k. Coefficients are either complex doubles
/// or exact real rationals; zero coefficients are never stored.
template <class C>
class BasicTrigPoly {
 public:
  using map_type = std::map<int, C>;

  BasicTrigPoly() = default;
  BasicTrigPoly(std::initializer_list<std::pair<const int, C>> init) {
    for (const auto& [k, c] : init) add(k, c);
  }

  static BasicTrigPoly constant(const C& c) { return monomial(0, c); }
  static BasicTrigPoly monomial(int k, const C& c = C(1)) {
    BasicTrigPoly p;
    p.add(k, c);
    return p;
  }

  const map_type& coefficients() const { return coeffs_; }
  C coeff(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? C{} : it->second;
  }
  bool is_zero() const { return coeffs_.empty(); }
  int min_frequency() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
  int max_frequency() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

  /// Adds c to the coefficient of e_k.
  void add(int k, const C& c) {
    C& slot = coeffs_[k];
    slot += c;
    if (slot == C{}) coeffs_.erase(k);
  }

  /// ∫_0^1 f(t) dt.
  C integral() const { return coeff(0); }

  std::complex<double> operator()(double t) const {
    CompensatedSum<std::complex<double>> acc;
    for (const auto& [k, c] : coeffs_) acc.add(as_complex(c) * basis_value(k, t));
    return acc.value();
  }

  /// Complex conjugate function: Σ conj(c_k) e_{-k}.
  BasicTrigPoly conj() const {
    BasicTrigPoly out;
    for (const auto& [k, c] : coeffs_) out.add(-k, conj_value(c));
    return out;
  }

  /// f∘σ with σ(t) = d·t mod 1, i.e. e_k ↦ e_{dk}.
  BasicTrigPoly compose_multiply(int d) const {
    BasicTrigPoly out;
    for (const auto& [k, c] : coeffs_) out.add(d * k, c);
    return out;
  }

  friend BasicTrigPoly operator+(const BasicTrigPoly& a, const BasicTrigPoly& b) {
    BasicTrigPoly out = a;
    for (const auto& [k, c] : b.coeffs_) out.add(k, c);
    return out;
  }
  friend BasicTrigPoly operator-(const BasicTrigPoly& a, const BasicTrigPoly& b) {
    BasicTrigPoly out = a;
    for (const auto& [k, c] : b.coeffs_) out.add(k, -c);
    return out;
  }
  /// Product of functions = convolution of coefficient sequences.
  friend BasicTrigPoly operator*(const BasicTrigPoly& a, const BasicTrigPoly& b) {
    BasicTrigPoly out;
    for (const auto& [j, cj] : a.coeffs_) {
      for (const auto& [k, ck] : b.coeffs_) out.add(j + k, cj * ck);
    }
    return out;
  }
  friend BasicTrigPoly operator*(const C& s, const BasicTrigPoly& a) {
    BasicTrigPoly out;
    for (const auto& [k, c] : a.coeffs_) out.add(k, s * c);
    return out;
  }

  friend bool operator==(const BasicTrigPoly&, const BasicTrigPoly&) = default;

  static std::complex<double> as_complex(const C& c) {
    if constexpr (std::is_same_v<C, Rational>) {
      return {c.to_double(), 0.0};
    } else {
      return std::complex<double>(c);
    }
  }

 private:
  map_type coeffs_;
};

using TrigPoly = BasicTrigPoly<std::complex<double>>;
using RationalTrigPoly = BasicTrigPoly<Rational>;

inline TrigPoly to_complex(const RationalTrigPoly& p) {
  TrigPoly out;
  for (const auto& [k, c] : p.coefficients()) out.add(k, RationalTrigPoly::as_complex(c));
  return out;
}

/// (T_W f)(t) = Σ_{j=0}^{d-1} W((t+j)/d) f((t+j)/d), computed on
/// coefficients: g = W·f keeps the frequencies divisible by d, re-indexed
/// k ↦ k/d and multiplied by d.
template <class C>
BasicTrigPoly<C> transfer_apply(const BasicTrigPoly<C>& w, const BasicTrigPoly<C>& f, int d) {
  if (d < 2) throw std::invalid_argument("scaling degree must be at least 2");
  const BasicTrigPoly<C> g = w * f;
  BasicTrigPoly<C> out;
  for (const auto& [k, c] : g.coefficients()) {
    if (k % d == 0) out.add(k / d, C(d) * c);
  }
  return out;
}

/// (1/d) Σ_{j=0}^{d-1} f((t+j)/d): frequencies divisible by d, re-indexed
/// k ↦ k/d, coefficients unchanged.
template <class C>
BasicTrigPoly<C> branch_average(const BasicTrigPoly<C>& f, int d) {
  if (d < 2) throw std::invalid_argument("scaling degree must be at least 2");
  BasicTrigPoly<C> out;
  for (const auto& [k, c] : f.coefficients()) {
    if (k % d == 0) out.add(k / d, c);
  }
  return out;
}

/// The same operator evaluated pointwise from the branch sum.
inline std::complex<double> transfer_apply_at(const TrigPoly& w, const TrigPoly& f, int d, double t) {
  if (d < 2) throw std::invalid_argument("scaling degree must be at least 2");
  CompensatedSum<std::complex<double>> acc;
  for (int j = 0; j < d; ++j) {
    const double y = (t + j) / d;
    acc.add(w(y) * f(y));
  }
  return acc.value();
}

/// <f, g> = ∫ conj(f) g = Σ conj(f_k) g_k.
inline std::complex<double> inner(const TrigPoly& f, const TrigPoly& g) {
  CompensatedSum<std::complex<double>> acc;
  for (const auto& [k, c] : f.coefficients()) acc.add(std::conj(c) * g.coeff(k));
  return acc.value();
}

}  // namespace spectral_walks
