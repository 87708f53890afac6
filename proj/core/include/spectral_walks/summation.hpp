#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>

#include "spectral_walks/rational.hpp"

namespace spectral_walks {

inline double conj_value(double x) { return x; }
inline std::complex<double> conj_value(const std::complex<double>& z) { return std::conj(z); }
inline double to_double(double x) { return x; }

/// Neumaier-compensated accumulator for double and complex<double>.
/// For exact scalar types (Rational) it degrades to a plain running sum.
template <class T>
class CompensatedSum {
 public:
  void add(const T& x) { sum_ += x; }
  T value() const { return sum_; }

 private:
  T sum_{};
};

template <>
class CompensatedSum<double> {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <>
class CompensatedSum<std::complex<double>> {
 public:
  void add(const std::complex<double>& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

/// Pairwise (cascade) summation; the result depends only on the order of
/// the input, not on how it was produced.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kLeaf = 32;
  if (xs.size() <= kLeaf) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace spectral_walks
