#pragma once

// Finite-state Markov chains and their cylinder path measures: exact
// evaluation of path-space expectations, seeded path simulation, and the
// statistical checks that compare the two.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectral_walks/graph.hpp"

namespace spectral_walks {

/// Every statistical comparison in this library passes at ≤ 5 standard errors.
inline constexpr double kSigmaThreshold = 5.0;

class MarkovError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The stationary measure is not unique (or the chain is not ergodic).
class ReducibleChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-stochastic kernel p on states {0, …, n-1} with an initial measure μ₀.
class FiniteMarkov {
 public:
  FiniteMarkov(Eigen::MatrixXd p, Eigen::VectorXd mu0);

  /// p(x,y) = c(x,y)/c(x), μ₀(x) = c(x)/Σ_y c(y).
  static FiniteMarkov from_graph(const WeightedGraph& g);

  std::size_t size() const { return static_cast<std::size_t>(p_.rows()); }
  const Eigen::MatrixXd& p() const { return p_; }
  const Eigen::VectorXd& mu0() const { return mu0_; }

  FiniteMarkov with_initial(Eigen::VectorXd mu0) const { return {p_, std::move(mu0)}; }
  FiniteMarkov started_at(std::size_t state) const;
  /// Replaces the rows of the given states with p(x,x) = 1.
  FiniteMarkov with_absorbing(std::span<const std::size_t> states) const;

  /// (Tf)(x) = Σ_y p(x,y) f(y).
  Eigen::VectorXd transfer(const Eigen::VectorXd& f) const;

 private:
  Eigen::MatrixXd p_;
  Eigen::VectorXd mu0_;
};

bool is_irreducible(const FiniteMarkov& fm);
/// Requires irreducibility; gcd of cycle lengths equal to one.
bool is_aperiodic(const FiniteMarkov& fm);

/// μ with μᵀp = μᵀ, Σμ = 1. Throws ReducibleChainError if the chain is
/// reducible; the residual ‖μᵀp − μᵀ‖_∞ is at most 1e-12.
Eigen::VectorXd stationary_measure(const FiniteMarkov& fm);

struct ErgodicReport {
  int iterations = 0;
  double limit = 0.0;     ///< μ₀(f)
  double residual = 0.0;  ///< max_x |(Tⁿf)(x) − μ₀(f)|
  bool converged = false;
};

/// Power iteration Tⁿf → μ₀(f)·1 with μ₀ the stationary measure. Throws
/// ReducibleChainError for chains that are not irreducible and aperiodic.
ErgodicReport ergodic_limit_check(const FiniteMarkov& fm, const Eigen::VectorXd& f, double tolerance = 1e-10,
                                  int max_iterations = 1'000'000);

/// Simulated trajectories Z_0 … Z_{n_steps}, path-major.
struct PathEnsemble {
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  std::size_t n_steps = 0;
  std::vector<std::uint32_t> states;

  std::uint32_t at(std::size_t path, std::size_t step) const { return states[path * (n_steps + 1) + step]; }
};

/// Z_0 ~ μ₀, Z_{k+1} | Z_k = x ~ p(x,·). Path i draws from stream i of the
/// counter-based generator, so the result does not depend on `threads`.
PathEnsemble simulate(const FiniteMarkov& fm, std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                      unsigned threads = 1);

struct Estimate {
  double estimate = 0.0;
  double se = 0.0;
};

/// Result of comparing a Monte Carlo estimate with an exact value.
struct Check {
  std::string name;
  double estimate = 0.0;
  double exact = 0.0;
  double se = 0.0;
  double sigmas = 0.0;
  bool passed = false;
};

/// |estimate − exact| / se, with the zero-SE case resolved by exact equality
/// up to rounding.
double sigma_distance(double estimate, double exact, double se);
Check compare(std::string name, const Estimate& est, double exact);

/// Sample mean and its standard error, reduced by pairwise summation.
Estimate mean_estimate(std::span<const double> samples);

/// Σ_{x_0∈E_0} … Σ_{x_n∈E_n} μ₀(x_0) p(x_0,x_1) … p(x_{n-1},x_n).
double cylinder_mass(const FiniteMarkov& fm, const std::vector<std::vector<std::size_t>>& sets);
Estimate cylinder_frequency(const PathEnsemble& ens, const std::vector<std::vector<std::size_t>>& sets);

/// E(f1∘Z_n · f2∘Z_{n+1}) = ∫ Tⁿ(f1 · Tf2) dμ₀.
double covariance_exact(const FiniteMarkov& fm, const Eigen::VectorXd& f1, const Eigen::VectorXd& f2,
                        std::size_t n);
/// Ensemble mean of f1(Z_n) f2(Z_{n+1}) with its standard error.
Estimate covariance_mc(const PathEnsemble& ens, const Eigen::VectorXd& f1, const Eigen::VectorXd& f2,
                       std::size_t n);

/// One conditional-mean bin.
struct BinCheck {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t state = 0;
  std::size_t previous = kNone;  ///< set for two-step conditioning
  std::size_t visits = 0;
  double empirical = 0.0;
  double exact = 0.0;
  double se = 0.0;
  double sigmas = 0.0;
  bool flagged = false;  ///< fewer than min_visits samples; excluded
};

struct ConditionalReport {
  std::vector<BinCheck> bins;
  double max_sigmas = 0.0;
  std::size_t checked = 0;
  std::size_t flagged = 0;
  bool passed = false;  ///< at least one bin checked and all within 5 SE
};

/// Per state x, mean of f(Z_{n+1}) over paths with Z_n = x versus (Tf)(x).
ConditionalReport markov_check(const PathEnsemble& ens, const FiniteMarkov& fm, const Eigen::VectorXd& f,
                               std::size_t n, std::size_t min_visits = 100);

/// Conditions on (Z_{n-1}, Z_n) instead; the Markov property makes the
/// target (Tf)(Z_n) regardless of Z_{n-1}. Requires n ≥ 1.
ConditionalReport markov_history_check(const PathEnsemble& ens, const FiniteMarkov& fm, const Eigen::VectorXd& f,
                                       std::size_t n, std::size_t min_visits = 100);

/// Solves Th = h on non-boundary states with boundary values pinned.
Eigen::VectorXd harmonic_solve(const FiniteMarkov& fm, const std::map<std::size_t, double>& boundary);

/// Per state x, mean of h(Z_{n+1}) given Z_n = x (pooled over all n) versus h(x).
ConditionalReport martingale_check(const PathEnsemble& ens, const Eigen::VectorXd& h,
                                   std::size_t min_visits = 100);

/// For every start x: mean of h(Z_N) under P_x versus h(x).
std::vector<Check> doob_boundary_check(const FiniteMarkov& fm, const Eigen::VectorXd& h, std::size_t steps,
                                       std::size_t n_paths, std::uint64_t seed, unsigned threads = 1);

}  // namespace spectral_walks
