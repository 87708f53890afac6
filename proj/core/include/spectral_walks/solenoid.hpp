#pragma once

// Random walks on the dyadic solenoid: from angle t the walk moves to one of
// the two preimages t/2, t/2 + ½ under σ(t) = 2t with probabilities given by
// the filter function W. States are exact dyadic rationals.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "spectral_walks/markov.hpp"
#include "spectral_walks/trig_poly.hpp"

namespace spectral_walks {

/// numerator / 2^level in [0, 1).
struct DyadicAngle {
  static constexpr unsigned kMaxLevel = 62;

  std::uint64_t numerator = 0;
  unsigned level = 0;

  DyadicAngle() = default;
  DyadicAngle(std::uint64_t num, unsigned lvl);

  double to_double() const;
  /// Preimage under doubling: branch 0 is t/2, branch 1 is t/2 + ½.
  DyadicAngle preimage(unsigned branch) const;

  friend bool operator==(const DyadicAngle&, const DyadicAngle&) = default;
};

/// f(t) with the phase of each e_k reduced exactly modulo 1 in integers.
std::complex<double> evaluate(const TrigPoly& f, const DyadicAngle& t);

/// Uniform law on the 2^level grid points of [0, 1).
struct UniformGrid {
  unsigned level = 10;
};
using SolenoidStart = std::variant<DyadicAngle, UniformGrid>;

struct SolenoidEnsemble {
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  std::size_t n_steps = 0;
  std::vector<DyadicAngle> states;

  const DyadicAngle& at(std::size_t path, std::size_t step) const { return states[path * (n_steps + 1) + step]; }
};

/// Checks that W is real, non-negative on a 2^12 grid, and that
/// W(t/2) + W(t/2 + ½) = 1 on a 2^9 grid to 1e-10. Throws std::invalid_argument.
void validate_walk_filter(const TrigPoly& w);

SolenoidEnsemble solenoid_walk(const TrigPoly& w, std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                               const SolenoidStart& start, unsigned threads = 1);

/// E[f1(Z_n) f2(Z_{n+1})] = E_start[Tⁿ_W(f1 · T_W f2)(Z_0)], on coefficients.
/// f1, f2 must be real-valued.
double solenoid_covariance_exact(const TrigPoly& w, const TrigPoly& f1, const TrigPoly& f2, std::size_t n,
                                 const SolenoidStart& start);
Estimate solenoid_covariance_mc(const SolenoidEnsemble& ens, const TrigPoly& f1, const TrigPoly& f2, std::size_t n);

/// True when every coefficient satisfies c_{-k} = conj(c_k) to `tolerance`.
bool is_real_valued(const TrigPoly& f, double tolerance = 1e-12);

}  // namespace spectral_walks
