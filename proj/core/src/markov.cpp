#include "spectral_walks/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "spectral_walks/parallel.hpp"
#include "spectral_walks/rng.hpp"
#include "spectral_walks/summation.hpp"

namespace spectral_walks {

namespace {

constexpr double kStochasticTolerance = 1e-12;

void require_function(const FiniteMarkov& fm, const Eigen::VectorXd& f) {
  if (static_cast<std::size_t>(f.size()) != fm.size()) {
    throw MarkovError("function has " + std::to_string(f.size()) + " values, chain has " +
                      std::to_string(fm.size()) + " states");
  }
}

void require_ensemble(const PathEnsemble& ens, const Eigen::VectorXd& f) {
  for (auto s : ens.states) {
    if (s >= static_cast<std::size_t>(f.size())) throw MarkovError("ensemble visits a state outside the function");
  }
}

/// Cumulative distribution over the support of one row (or of μ₀).
struct Sampler {
  std::vector<std::uint32_t> support;
  std::vector<double> cumulative;

  explicit Sampler(const Eigen::Ref<const Eigen::VectorXd>& weights) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < weights.size(); ++j) {
      if (weights(j) > 0.0) {
        acc += weights(j);
        support.push_back(static_cast<std::uint32_t>(j));
        cumulative.push_back(acc);
      }
    }
  }

  std::uint32_t draw(double u) const {
    const double target = u * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), support.size() - 1);
    return support[k];
  }
};

std::vector<std::size_t> reachable_from(const Eigen::MatrixXd& p, std::size_t start, bool transpose) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::size_t> level(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> queue{start};
  level[start] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t x = queue[head];
    for (std::size_t y = 0; y < n; ++y) {
      const double w = transpose ? p(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x))
                                 : p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      if (w > 0.0 && level[y] == std::numeric_limits<std::size_t>::max()) {
        level[y] = level[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return level;
}

ConditionalReport summarize(std::vector<BinCheck> bins, std::size_t min_visits) {
  ConditionalReport report;
  for (auto& b : bins) {
    if (b.visits < min_visits) {
      b.flagged = true;
      ++report.flagged;
      continue;
    }
    ++report.checked;
    report.max_sigmas = std::max(report.max_sigmas, b.sigmas);
  }
  report.bins = std::move(bins);
  report.passed = report.checked > 0 && report.max_sigmas <= kSigmaThreshold;
  return report;
}

/// Accumulates samples per bin key, then reduces each bin in key order.
class Binner {
 public:
  void add(std::size_t key, double value) { samples_[key].push_back(value); }

  template <class Exact>
  std::vector<BinCheck> finish(Exact&& exact, std::size_t states) const {
    std::vector<BinCheck> out;
    for (const auto& [key, values] : samples_) {
      BinCheck b;
      if (key >= states) {
        b.previous = key / states - 1;
        b.state = key % states;
      } else {
        b.state = key;
      }
      b.visits = values.size();
      b.exact = exact(b.state);
      if (values.size() >= 2) {
        const Estimate e = mean_estimate(values);
        b.empirical = e.estimate;
        b.se = e.se;
      } else {
        b.empirical = values.front();
      }
      b.sigmas = sigma_distance(b.empirical, b.exact, b.se);
      out.push_back(b);
    }
    return out;
  }

 private:
  std::map<std::size_t, std::vector<double>> samples_;
};

}  // namespace

FiniteMarkov::FiniteMarkov(Eigen::MatrixXd p, Eigen::VectorXd mu0) : p_(std::move(p)), mu0_(std::move(mu0)) {
  if (p_.rows() == 0 || p_.rows() != p_.cols()) throw MarkovError("transition matrix must be square and non-empty");
  if (mu0_.size() != p_.rows()) throw MarkovError("initial measure has the wrong dimension");
  for (Eigen::Index x = 0; x < p_.rows(); ++x) {
    if ((p_.row(x).array() < 0.0).any()) throw MarkovError("negative transition probability in row " + std::to_string(x));
    if (std::abs(p_.row(x).sum() - 1.0) > kStochasticTolerance) {
      throw MarkovError("row " + std::to_string(x) + " does not sum to 1");
    }
  }
  if ((mu0_.array() < 0.0).any() || std::abs(mu0_.sum() - 1.0) > kStochasticTolerance) {
    throw MarkovError("initial measure must be a probability vector");
  }
}

FiniteMarkov FiniteMarkov::from_graph(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd mu(n);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    for (const auto& nb : g.neighbors(x)) {
      p(xi, static_cast<Eigen::Index>(nb.vertex)) = nb.c / g.total_conductance(x);
    }
    mu(xi) = g.total_conductance(x);
  }
  mu /= mu.sum();
  return {std::move(p), std::move(mu)};
}

FiniteMarkov FiniteMarkov::started_at(std::size_t state) const {
  if (state >= size()) throw MarkovError("start state out of range");
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(p_.rows());
  mu(static_cast<Eigen::Index>(state)) = 1.0;
  return with_initial(std::move(mu));
}

FiniteMarkov FiniteMarkov::with_absorbing(std::span<const std::size_t> states) const {
  Eigen::MatrixXd p = p_;
  for (auto s : states) {
    if (s >= size()) throw MarkovError("absorbing state out of range");
    const auto si = static_cast<Eigen::Index>(s);
    p.row(si).setZero();
    p(si, si) = 1.0;
  }
  return {std::move(p), mu0_};
}

Eigen::VectorXd FiniteMarkov::transfer(const Eigen::VectorXd& f) const {
  require_function(*this, f);
  return p_ * f;
}

bool is_irreducible(const FiniteMarkov& fm) {
  const auto unreached = std::numeric_limits<std::size_t>::max();
  const auto fwd = reachable_from(fm.p(), 0, false);
  const auto bwd = reachable_from(fm.p(), 0, true);
  return std::none_of(fwd.begin(), fwd.end(), [&](auto l) { return l == unreached; }) &&
         std::none_of(bwd.begin(), bwd.end(), [&](auto l) { return l == unreached; });
}

bool is_aperiodic(const FiniteMarkov& fm) {
  if (!is_irreducible(fm)) return false;
  const auto level = reachable_from(fm.p(), 0, false);
  std::size_t period = 0;
  for (std::size_t x = 0; x < fm.size(); ++x) {
    for (std::size_t y = 0; y < fm.size(); ++y) {
      if (fm.p()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) > 0.0) {
        const auto diff = static_cast<long long>(level[x]) + 1 - static_cast<long long>(level[y]);
        period = std::gcd(period, static_cast<std::size_t>(std::llabs(diff)));
      }
    }
  }
  return period == 1;
}

Eigen::VectorXd stationary_measure(const FiniteMarkov& fm) {
  if (!is_irreducible(fm)) throw ReducibleChainError("chain is reducible; the stationary measure is not unique");
  const auto n = static_cast<Eigen::Index>(fm.size());
  Eigen::MatrixXd a = fm.p().transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd mu = lu.solve(b);
  auto residual = [&] { return (fm.p().transpose() * mu - mu).cwiseAbs().maxCoeff(); };
  for (int refine = 0; refine < 3 && residual() > 1e-14; ++refine) mu += lu.solve(b - a * mu);
  if (residual() > 1e-12) throw std::runtime_error("stationary solve residual above 1e-12");
  return mu;
}

ErgodicReport ergodic_limit_check(const FiniteMarkov& fm, const Eigen::VectorXd& f, double tolerance,
                                  int max_iterations) {
  require_function(fm, f);
  if (!is_aperiodic(fm)) throw ReducibleChainError("chain is not irreducible and aperiodic");
  ErgodicReport report;
  report.limit = stationary_measure(fm).dot(f);
  Eigen::VectorXd g = f;
  report.residual = (g.array() - report.limit).abs().maxCoeff();
  while (report.residual > tolerance && report.iterations < max_iterations) {
    g = fm.p() * g;
    ++report.iterations;
    report.residual = (g.array() - report.limit).abs().maxCoeff();
  }
  report.converged = report.residual <= tolerance;
  return report;
}

PathEnsemble simulate(const FiniteMarkov& fm, std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                      unsigned threads) {
  PathEnsemble ens;
  ens.seed = seed;
  ens.n_paths = n_paths;
  ens.n_steps = n_steps;
  ens.states.resize(n_paths * (n_steps + 1));

  const Sampler initial(fm.mu0());
  std::vector<Sampler> rows;
  rows.reserve(fm.size());
  for (Eigen::Index x = 0; x < fm.p().rows(); ++x) rows.emplace_back(fm.p().row(x).transpose());

  parallel_chunks(n_paths, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t path = begin; path < end; ++path) {
      CounterRng rng(seed, path);
      std::uint32_t* out = ens.states.data() + path * (n_steps + 1);
      out[0] = initial.draw(rng.uniform());
      for (std::size_t k = 0; k < n_steps; ++k) out[k + 1] = rows[out[k]].draw(rng.uniform());
    }
  });
  return ens;
}

double sigma_distance(double estimate, double exact, double se) {
  const double dev = std::abs(estimate - exact);
  if (se > 0.0) return dev / se;
  return dev <= 1e-12 * std::max(1.0, std::abs(exact)) ? 0.0 : std::numeric_limits<double>::infinity();
}

Check compare(std::string name, const Estimate& est, double exact) {
  Check c;
  c.name = std::move(name);
  c.estimate = est.estimate;
  c.exact = exact;
  c.se = est.se;
  c.sigmas = sigma_distance(est.estimate, exact, est.se);
  c.passed = c.sigmas <= kSigmaThreshold;
  return c;
}

Estimate mean_estimate(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  const auto n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  if (samples.size() < 2) return {mean, 0.0};
  std::vector<double> dev2(samples.size());
  std::transform(samples.begin(), samples.end(), dev2.begin(), [mean](double x) { return (x - mean) * (x - mean); });
  const double var = pairwise_sum(dev2) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

double cylinder_mass(const FiniteMarkov& fm, const std::vector<std::vector<std::size_t>>& sets) {
  if (sets.empty()) throw MarkovError("need at least one cylinder coordinate");
  const auto n = static_cast<Eigen::Index>(fm.size());
  auto mask = [&](const std::vector<std::size_t>& set) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    for (auto s : set) {
      if (s >= fm.size()) throw MarkovError("cylinder set contains an unknown state");
      m(static_cast<Eigen::Index>(s)) = 1.0;
    }
    return m;
  };
  Eigen::RowVectorXd v = fm.mu0().transpose().cwiseProduct(mask(sets[0]).transpose());
  for (std::size_t k = 1; k < sets.size(); ++k) v = (v * fm.p()).cwiseProduct(mask(sets[k]).transpose());
  return v.sum();
}

Estimate cylinder_frequency(const PathEnsemble& ens, const std::vector<std::vector<std::size_t>>& sets) {
  if (sets.empty() || sets.size() > ens.n_steps + 1) throw MarkovError("cylinder longer than the simulated paths");
  std::vector<std::vector<char>> member(sets.size());
  std::size_t max_state = 0;
  for (auto s : ens.states) max_state = std::max<std::size_t>(max_state, s);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    member[k].assign(max_state + 1, 0);
    for (auto s : sets[k]) {
      if (s <= max_state) member[k][s] = 1;
    }
  }
  std::vector<double> hits(ens.n_paths);
  for (std::size_t path = 0; path < ens.n_paths; ++path) {
    bool in = true;
    for (std::size_t k = 0; k < sets.size() && in; ++k) in = member[k][ens.at(path, k)] != 0;
    hits[path] = in ? 1.0 : 0.0;
  }
  return mean_estimate(hits);
}

double covariance_exact(const FiniteMarkov& fm, const Eigen::VectorXd& f1, const Eigen::VectorXd& f2,
                        std::size_t n) {
  require_function(fm, f1);
  require_function(fm, f2);
  Eigen::VectorXd h = f1.cwiseProduct(fm.transfer(f2));
  for (std::size_t k = 0; k < n; ++k) h = fm.p() * h;
  return fm.mu0().dot(h);
}

Estimate covariance_mc(const PathEnsemble& ens, const Eigen::VectorXd& f1, const Eigen::VectorXd& f2,
                       std::size_t n) {
  if (n + 1 > ens.n_steps) throw MarkovError("covariance lag exceeds the simulated horizon");
  if (f1.size() != f2.size()) throw MarkovError("function dimension mismatch");
  require_ensemble(ens, f1);
  std::vector<double> samples(ens.n_paths);
  for (std::size_t path = 0; path < ens.n_paths; ++path) {
    samples[path] = f1(ens.at(path, n)) * f2(ens.at(path, n + 1));
  }
  return mean_estimate(samples);
}

ConditionalReport markov_check(const PathEnsemble& ens, const FiniteMarkov& fm, const Eigen::VectorXd& f,
                               std::size_t n, std::size_t min_visits) {
  if (n + 1 > ens.n_steps) throw MarkovError("conditioning step exceeds the simulated horizon");
  const Eigen::VectorXd tf = fm.transfer(f);
  require_ensemble(ens, f);
  Binner binner;
  for (std::size_t path = 0; path < ens.n_paths; ++path) binner.add(ens.at(path, n), f(ens.at(path, n + 1)));
  return summarize(binner.finish([&](std::size_t x) { return tf(static_cast<Eigen::Index>(x)); }, fm.size()),
                   min_visits);
}

ConditionalReport markov_history_check(const PathEnsemble& ens, const FiniteMarkov& fm, const Eigen::VectorXd& f,
                                       std::size_t n, std::size_t min_visits) {
  if (n == 0 || n + 1 > ens.n_steps) throw MarkovError("two-step conditioning needs 1 ≤ n < n_steps");
  const Eigen::VectorXd tf = fm.transfer(f);
  require_ensemble(ens, f);
  const std::size_t states = fm.size();
  Binner binner;
  for (std::size_t path = 0; path < ens.n_paths; ++path) {
    const std::size_t key = (ens.at(path, n - 1) + 1) * states + ens.at(path, n);
    binner.add(key, f(ens.at(path, n + 1)));
  }
  return summarize(binner.finish([&](std::size_t x) { return tf(static_cast<Eigen::Index>(x)); }, states),
                   min_visits);
}

Eigen::VectorXd harmonic_solve(const FiniteMarkov& fm, const std::map<std::size_t, double>& boundary) {
  if (boundary.empty()) throw MarkovError("harmonic_solve needs at least one boundary value");
  const std::size_t n = fm.size();
  std::vector<std::size_t> interior;
  std::vector<Eigen::Index> slot(n, -1);
  for (std::size_t x = 0; x < n; ++x) {
    if (boundary.count(x) == 0) {
      slot[x] = static_cast<Eigen::Index>(interior.size());
      interior.push_back(x);
    }
  }
  for (const auto& [x, v] : boundary) {
    if (x >= n) throw MarkovError("boundary state out of range");
  }
  Eigen::VectorXd h(static_cast<Eigen::Index>(n));
  for (const auto& [x, v] : boundary) h(static_cast<Eigen::Index>(x)) = v;
  if (interior.empty()) return h;

  const auto m = static_cast<Eigen::Index>(interior.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto x = static_cast<Eigen::Index>(interior[static_cast<std::size_t>(i)]);
    for (std::size_t y = 0; y < n; ++y) {
      const double pxy = fm.p()(x, static_cast<Eigen::Index>(y));
      if (pxy == 0.0) continue;
      if (slot[y] >= 0) {
        a(i, slot[y]) -= pxy;
      } else {
        b(i) += pxy * boundary.at(y);
      }
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw SingularSystemError("interior system is singular (a closed class avoids the boundary)");
  Eigen::VectorXd sol = lu.solve(b);
  sol += lu.solve(b - a * sol);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if ((a * sol - b).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SingularSystemError("harmonic solve residual above 1e-12");
  }
  for (Eigen::Index i = 0; i < m; ++i) h(static_cast<Eigen::Index>(interior[static_cast<std::size_t>(i)])) = sol(i);
  return h;
}

ConditionalReport martingale_check(const PathEnsemble& ens, const Eigen::VectorXd& h, std::size_t min_visits) {
  if (ens.n_steps == 0) throw MarkovError("martingale check needs at least one step");
  require_ensemble(ens, h);
  Binner binner;
  for (std::size_t path = 0; path < ens.n_paths; ++path) {
    for (std::size_t k = 0; k < ens.n_steps; ++k) binner.add(ens.at(path, k), h(ens.at(path, k + 1)));
  }
  return summarize(binner.finish([&](std::size_t x) { return h(static_cast<Eigen::Index>(x)); },
                                 static_cast<std::size_t>(h.size())),
                   min_visits);
}

std::vector<Check> doob_boundary_check(const FiniteMarkov& fm, const Eigen::VectorXd& h, std::size_t steps,
                                       std::size_t n_paths, std::uint64_t seed, unsigned threads) {
  require_function(fm, h);
  std::vector<Check> out;
  for (std::size_t x = 0; x < fm.size(); ++x) {
    const PathEnsemble ens = simulate(fm.started_at(x), steps, n_paths, mix64(seed + x), threads);
    std::vector<double> values(n_paths);
    for (std::size_t path = 0; path < n_paths; ++path) values[path] = h(ens.at(path, steps));
    out.push_back(compare("E_x[h(Z_N)] at state " + std::to_string(x), mean_estimate(values),
                          h(static_cast<Eigen::Index>(x))));
  }
  return out;
}

}  // namespace spectral_walks
