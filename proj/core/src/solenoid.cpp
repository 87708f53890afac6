#include "spectral_walks/solenoid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spectral_walks/parallel.hpp"
#include "spectral_walks/rng.hpp"

namespace spectral_walks {

namespace {

unsigned start_level(const SolenoidStart& start) {
  if (const auto* a = std::get_if<DyadicAngle>(&start)) return a->level;
  return std::get<UniformGrid>(start).level;
}

double real_checked(std::complex<double> z, const char* what) {
  if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real()))) {
    throw std::invalid_argument(std::string(what) + " is not real-valued");
  }
  return z.real();
}

}  // namespace

DyadicAngle::DyadicAngle(std::uint64_t num, unsigned lvl) : numerator(num), level(lvl) {
  if (lvl > kMaxLevel) throw std::invalid_argument("dyadic level above " + std::to_string(kMaxLevel));
  if (num >= (std::uint64_t{1} << lvl)) throw std::invalid_argument("dyadic numerator outside [0, 2^level)");
}

double DyadicAngle::to_double() const {
  return std::ldexp(static_cast<double>(numerator), -static_cast<int>(level));
}

DyadicAngle DyadicAngle::preimage(unsigned branch) const {
  if (branch > 1) throw std::invalid_argument("branch must be 0 or 1");
  return {numerator + (branch ? (std::uint64_t{1} << level) : 0), level + 1};
}

std::complex<double> evaluate(const TrigPoly& f, const DyadicAngle& t) {
  const unsigned __int128 modulus = static_cast<unsigned __int128>(1) << t.level;
  CompensatedSum<std::complex<double>> acc;
  for (const auto& [k, c] : f.coefficients()) {
    // k·numerator mod 2^level, computed exactly
    const auto kk = static_cast<__int128>(k);
    __int128 r = (kk * static_cast<__int128>(t.numerator)) % static_cast<__int128>(modulus);
    if (r < 0) r += static_cast<__int128>(modulus);
    const double frac = std::ldexp(static_cast<double>(r), -static_cast<int>(t.level));
    acc.add(c * std::polar(1.0, -2.0 * std::numbers::pi * frac));
  }
  return acc.value();
}

bool is_real_valued(const TrigPoly& f, double tolerance) {
  for (const auto& [k, c] : f.coefficients()) {
    if (std::abs(f.coeff(-k) - std::conj(c)) > tolerance) return false;
  }
  return true;
}

void validate_walk_filter(const TrigPoly& w) {
  if (!is_real_valued(w, 1e-12)) throw std::invalid_argument("walk filter W must be real-valued");
  constexpr int kPositivityGrid = 1 << 12;
  for (int i = 0; i < kPositivityGrid; ++i) {
    if (w(static_cast<double>(i) / kPositivityGrid).real() < -1e-12) {
      throw std::invalid_argument("walk filter W is negative at t = " + std::to_string(i) + "/4096");
    }
  }
  constexpr int kBranchGrid = 1 << 9;
  const TrigPoly one = TrigPoly::constant(1.0);
  for (int i = 0; i < kBranchGrid; ++i) {
    const double t = static_cast<double>(i) / kBranchGrid;
    if (std::abs(transfer_apply_at(w, one, 2, t) - 1.0) > 1e-10) {
      throw std::invalid_argument("W(t/2) + W(t/2 + 1/2) != 1 at t = " + std::to_string(t));
    }
  }
}

SolenoidEnsemble solenoid_walk(const TrigPoly& w, std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                               const SolenoidStart& start, unsigned threads) {
  validate_walk_filter(w);
  const unsigned level0 = start_level(start);
  if (level0 + n_steps > DyadicAngle::kMaxLevel) {
    throw std::invalid_argument("walk would exceed dyadic level " + std::to_string(DyadicAngle::kMaxLevel));
  }
  SolenoidEnsemble ens;
  ens.seed = seed;
  ens.n_paths = n_paths;
  ens.n_steps = n_steps;
  ens.states.resize(n_paths * (n_steps + 1));

  parallel_chunks(n_paths, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t path = begin; path < end; ++path) {
      CounterRng rng(seed, path);
      DyadicAngle* out = ens.states.data() + path * (n_steps + 1);
      if (const auto* a = std::get_if<DyadicAngle>(&start)) {
        out[0] = *a;
      } else {
        const unsigned lvl = std::get<UniformGrid>(start).level;
        out[0] = DyadicAngle(lvl == 0 ? 0 : rng.next() >> (64U - lvl), lvl);
      }
      for (std::size_t k = 0; k < n_steps; ++k) {
        const DyadicAngle y0 = out[k].preimage(0);
        const DyadicAngle y1 = out[k].preimage(1);
        const double p0 = std::max(0.0, evaluate(w, y0).real());
        const double p1 = std::max(0.0, evaluate(w, y1).real());
        out[k + 1] = rng.uniform() * (p0 + p1) < p0 ? y0 : y1;
      }
    }
  });
  return ens;
}

double solenoid_covariance_exact(const TrigPoly& w, const TrigPoly& f1, const TrigPoly& f2, std::size_t n,
                                 const SolenoidStart& start) {
  if (!is_real_valued(f1) || !is_real_valued(f2)) throw std::invalid_argument("test functions must be real-valued");
  TrigPoly h = f1 * transfer_apply(w, f2, 2);
  for (std::size_t k = 0; k < n; ++k) h = transfer_apply(w, h, 2);
  if (const auto* a = std::get_if<DyadicAngle>(&start)) return real_checked(evaluate(h, *a), "covariance");
  // The average of e_k over the 2^L grid is 1 when 2^L divides k, else 0.
  const long long period = 1LL << std::get<UniformGrid>(start).level;
  std::complex<double> total{};
  for (const auto& [k, c] : h.coefficients()) {
    if (k % period == 0) total += c;
  }
  return real_checked(total, "covariance");
}

Estimate solenoid_covariance_mc(const SolenoidEnsemble& ens, const TrigPoly& f1, const TrigPoly& f2, std::size_t n) {
  if (n + 1 > ens.n_steps) throw std::invalid_argument("covariance lag exceeds the simulated horizon");
  if (!is_real_valued(f1) || !is_real_valued(f2)) throw std::invalid_argument("test functions must be real-valued");
  std::vector<double> samples(ens.n_paths);
  for (std::size_t path = 0; path < ens.n_paths; ++path) {
    samples[path] = evaluate(f1, ens.at(path, n)).real() * evaluate(f2, ens.at(path, n + 1)).real();
  }
  return mean_estimate(samples);
}

}  // namespace spectral_walks
