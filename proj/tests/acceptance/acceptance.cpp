// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spectral_walks/cli/cli.hpp"
#include "spectral_walks/gram.hpp"
#include "spectral_walks/graph_io.hpp"
#include "spectral_walks/jacobi.hpp"
#include "spectral_walks/markov.hpp"
#include "spectral_walks/tree.hpp"
#include "spectral_walks/wavelet.hpp"

using namespace spectral_walks;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

class Detail {
 public:
  void fail(const std::string& what) {
    passed_ = false;
    add(what);
  }
  void add(const std::string& what) {
    if (!text_.empty()) text_ += "; ";
    text_ += what;
  }
  Outcome done() const { return {passed_, text_}; }

 private:
  bool passed_ = true;
  std::string text_;
};

std::string num(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

std::vector<Word> random_family(std::mt19937_64& rng, std::size_t max_size, std::size_t max_len) {
  const auto pool = words_up_to(max_len);
  std::set<std::size_t> picks;
  const std::size_t size = 2 + rng() % (max_size - 1);
  while (picks.size() < size) picks.insert(rng() % pool.size());
  std::vector<Word> out;
  for (auto i : picks) out.push_back(pool[i]);
  return out;
}

TrigPoly random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigPoly p;
  for (int k = -degree; k <= degree; ++k) p.add(k, {u(rng), u(rng)});
  return p;
}

Outcome dipole_kernel() {
  Detail d;
  const std::size_t depth = 8;
  const ExactGraph g = exact_tree_graph(depth);
  std::size_t bad_defect = 0;
  std::size_t bad_norm = 0;
  const auto words = words_up_to(6);
  for (const auto& x : words) {
    for (const auto& v : dipole_defect(x, depth)) bad_defect += (v == Rational(0)) ? 0 : 1;
    const auto vx = dipole_function<Rational>(x, depth);
    if (energy_inner(g, vx, vx) != Rational(static_cast<std::int64_t>(x.length()))) ++bad_norm;
  }
  d.add(std::to_string(words.size()) + " words, depth 8");
  if (bad_defect) d.fail(std::to_string(bad_defect) + " nonzero defect entries");
  if (bad_norm) d.fail(std::to_string(bad_norm) + " energy norms differ from l(x)");
  return d.done();
}

Outcome gram_identity() {
  Detail d;
  const std::size_t depth = 7;
  const ExactGraph g = exact_tree_graph(depth);
  const auto words = words_up_to(6);
  std::vector<VertexFunction<Rational>> v;
  for (const auto& x : words) v.push_back(dipole_function<Rational>(x, depth));
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (energy_inner(g, v[i], v[j]) != Rational(dipole_value(words[i], words[j]))) ++mismatches;
    }
  }
  d.add(std::to_string(words.size() * words.size()) + " pairs");
  if (mismatches) d.fail(std::to_string(mismatches) + " mismatches");
  return d.done();
}

Outcome reciprocity() {
  Detail d;
  std::mt19937_64 rng(2027);
  std::normal_distribution<double> z;
  const std::size_t depth = 6;
  const WeightedGraph tree = tree_graph(depth);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto family = random_family(rng, 16, 5);
    Eigen::VectorXd xi(static_cast<Eigen::Index>(family.size()));
    for (auto& c : xi) c = z(rng);
    xi.array() -= xi.mean();
    const std::vector<double> coeffs(xi.data(), xi.data() + xi.size());
    const double energy = rayleigh_energy(tree, dipole_combination(family, coeffs, depth));
    const double matrix = inverse_rayleigh(gram_matrix(family).cast<double>(), xi);
    worst = std::max(worst, std::abs(energy - matrix));
  }
  d.add("max residual " + num(worst, 3) + " over 100 vectors");
  if (!(worst <= 1e-9)) d.fail("residual above 1e-9");
  return d.done();
}

Outcome matrix_examples() {
  Detail d;
  auto close = [&](const std::string& what, double got, double want, double tol) {
    if (!(std::abs(got - want) <= tol)) d.fail(what + " = " + num(got, 12) + ", expected " + num(want, 12));
  };
  const auto e = eigh(mat2(1, 0, 0, 3));
  close("eigh diag(1,3) max", e.values(0), 3.0, 1e-10);
  close("eigh diag(1,3) min", e.values(1), 1.0, 1e-10);
  auto r = r_function(GramSpectrum::from_matrix(mat2(1, 0, 0, 3)));
  close("R(3) for diag(1,3)", r[0].r, 2.0 / 3.0, 1e-10);
  close("R(1) for diag(1,3)", r[1].r, 2.0, 1e-10);
  r = r_function(GramSpectrum::from_matrix(mat2(2, 1, 1, 2)));
  close("R(3) for [[2,1],[1,2]]", r[0].r, 1.0, 1e-10);
  close("R(1) for [[2,1],[1,2]]", r[1].r, 1.0, 1e-10);
  double lower_at_100 = 0.0;
  for (double n : {2.0, 10.0, 100.0}) {
    const auto gs = GramSpectrum::from_matrix(mat2(1, 1, 1, n));
    const double disc = std::sqrt((n + 1.0) * (n + 1.0) - 4.0 * (n - 1.0));
    close("lambda+ at n=" + num(n), gs.eigenvalues(0), (n + 1.0 + disc) / 2.0, 1e-9);
    close("lambda- at n=" + num(n), gs.eigenvalues(1), (n + 1.0 - disc) / 2.0, 1e-9);
    if (n == 100.0) lower_at_100 = gs.eigenvalues(1);
  }
  d.add("lambda-(100) = " + num(lower_at_100, 8) + ", |lambda- - 1| = " + num(std::abs(lower_at_100 - 1.0), 4));
  if (!(lower_at_100 > 1.0 && lower_at_100 < 1.02)) {
    // λ₊λ₋ = n − 1 < λ₊ forces λ₋ < 1; the root approaches 1 from below
    d.fail("lambda-(100) not in (1, 1.02): the closed form gives lambda- = (n-1)/lambda+ < 1 for every n");
  }
  return d.done();
}

Outcome spectral_growth_nested() {
  Detail d;
  std::string series;
  for (std::size_t depth = 1; depth <= 5; ++depth) {
    const auto family = words_up_to(depth);
    const double growth = spectral_growth(family);
    series += (series.empty() ? "" : " ") + std::to_string(family.size()) + ":" + num(growth, 12);
    if (!(std::abs(growth - static_cast<double>(family.size())) <= 1e-8)) {
      d.fail("growth " + num(growth, 12) + " at #F = " + std::to_string(family.size()));
    }
  }
  d.add("#F:growth " + series);
  return d.done();
}

Outcome kl_orthogonality() {
  Detail d;
  std::mt19937_64 rng(515);
  std::vector<std::vector<Word>> families{words_up_to(3)};
  for (int k = 0; k < 10; ++k) families.push_back(random_family(rng, 16, 5));
  double worst_w = 0.0;
  double worst_lap = 0.0;
  for (const auto& family : families) {
    const auto gs = GramSpectrum::from_words(family);
    const Eigen::MatrixXd expected = gs.eigenvalues.cwiseInverse().asDiagonal();
    worst_w = std::max(worst_w, (kl_gram_check(gs, 6, false) - expected).cwiseAbs().maxCoeff());
    worst_lap = std::max(worst_lap, (kl_laplacian_energy(gs, 6) - kl_laplacian_formula(gs)).cwiseAbs().maxCoeff());
  }
  d.add(std::to_string(families.size()) + " families, <w_j,w_k> err " + num(worst_w, 3) + ", <u_j,Du_k> err " +
        num(worst_lap, 3));
  if (!(worst_w <= 1e-8)) d.fail("KL Gram above 1e-8");
  if (!(worst_lap <= 1e-8)) d.fail("KL Laplacian formula above 1e-8");
  return d.done();
}

Outcome covariance_identity(unsigned threads) {
  Detail d;
  const std::vector<std::pair<std::string, WeightedGraph>> graphs{
      {"4-cycle", load_graph_json(std::string(SPECTRAL_WALKS_TEST_DATA) + "/cycle4.json")},
      {"15-vertex tree", tree_graph(3)}};
  double worst = 0.0;
  std::size_t checks = 0;
  for (const auto& [name, g] : graphs) {
    const auto fm = FiniteMarkov::from_graph(g);
    const auto n_states = static_cast<Eigen::Index>(fm.size());
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
    Eigen::VectorXd idx(n_states);
    Eigen::VectorXd wave(n_states);
    for (Eigen::Index x = 0; x < n_states; ++x) {
      idx(x) = static_cast<double>(x);
      wave(x) = std::cos(1.3 * static_cast<double>(x)) + 0.5;
    }
    const Eigen::VectorXd origin = Eigen::VectorXd::Unit(n_states, 0);
    pairs.emplace_back(idx, idx);
    pairs.emplace_back(origin, wave);
    pairs.emplace_back(wave, idx.array().square().matrix());
    // ⟨f₁·Tf₂⟩_c = Σ c(x) f₁(x)(Tf₂)(x) / Σ c
    Eigen::VectorXd c(n_states);
    for (Eigen::Index x = 0; x < n_states; ++x) c(x) = g.total_conductance(static_cast<std::size_t>(x));
    const auto ens = simulate(fm, 5, 100000, 4242, threads);
    for (const auto& [f1, f2] : pairs) {
      const double weighted = c.dot(f1.cwiseProduct(fm.transfer(f2))) / c.sum();
      for (std::size_t n : {0U, 1U, 4U}) {
        const double exact = covariance_exact(fm, f1, f2, n);
        if (!(std::abs(exact - weighted) <= 1e-12 * (1.0 + std::abs(weighted)))) {
          d.fail(name + ": exact path expectation differs from <f1 Tf2>_c");
        }
        const auto chk = compare("cov", covariance_mc(ens, f1, f2, n), weighted);
        worst = std::max(worst, chk.sigmas);
        ++checks;
        if (!chk.passed) d.fail(name + " n=" + std::to_string(n) + " at " + num(chk.sigmas, 3) + " SE");
      }
    }
  }
  d.add(std::to_string(checks) + " comparisons at 1e5 paths, max " + num(worst, 3) + " SE");
  return d.done();
}

Outcome harmonic_martingale(unsigned threads) {
  Detail d;
  const std::size_t n = 4;
  std::vector<std::string> ids;
  std::vector<EdgeSpec<double>> edges;
  for (std::size_t k = 0; k <= n; ++k) ids.push_back(std::to_string(k));
  for (std::size_t k = 0; k < n; ++k) edges.push_back({ids[k], ids[k + 1], 1.0});
  const auto fm = FiniteMarkov::from_graph(WeightedGraph::build(ids, edges, ids.front()));
  const Eigen::VectorXd h = harmonic_solve(fm, {{0, 0.0}, {n, 1.0}});
  for (std::size_t k = 0; k <= n; ++k) {
    if (!(std::abs(h(static_cast<Eigen::Index>(k)) - static_cast<double>(k) / 4.0) <= 1e-12)) d.fail("h(k) != k/4");
  }
  const std::vector<std::size_t> ends{0, n};
  const auto chain = fm.with_absorbing(ends).with_initial(Eigen::VectorXd::Constant(n + 1, 1.0 / (n + 1)));
  const auto ens = simulate(chain, 20, 100000, 8080, threads);
  const auto harmonic = martingale_check(ens, h);
  const Eigen::VectorXd control = h.array().square();
  const auto non_harmonic = martingale_check(ens, control);
  d.add("h: max " + num(harmonic.max_sigmas, 3) + " SE; h^2 control: max " + num(non_harmonic.max_sigmas, 3) + " SE");
  if (!harmonic.passed) d.fail("harmonic h rejected");
  if (!(non_harmonic.max_sigmas > kSigmaThreshold)) d.fail("non-harmonic control accepted");
  return d.done();
}

Outcome wavelet_criteria() {
  Detail d;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = -1e300;
  double least = 1e300;
  for (int i = 0; i < 10; ++i) {
    const double defect = tightness_defect(haar_filter(), u(rng), 512, 20);
    worst = std::max(worst, defect);
    least = std::min(least, defect);
  }
  const double stretched = tightness_defect(stretched_haar_filter(), 0.5, 512, 20);
  const double qmf_haar = qmf_check(haar_filter()).max_residual;
  const double qmf_d4 = qmf_check(daubechies4_filter()).max_residual;
  d.add("Haar defect in [" + num(least, 3) + ", " + num(worst, 3) + "], stretched at 1/2 " + num(stretched, 12) +
        ", QMF " + num(qmf_haar, 3) + " / " + num(qmf_d4, 3));
  if (!(worst <= 1e-3)) d.fail("Haar defect above 1e-3");
  if (!(std::abs(stretched - 1.0) <= 1e-6)) d.fail("stretched defect not 1");
  if (!(qmf_haar <= 1e-10 && qmf_d4 <= 1e-10)) d.fail("QMF residual above 1e-10");
  return d.done();
}

Outcome cantor_filter_criteria() {
  Detail d;
  const RationalTrigPoly w = cantor_filter();
  const RationalTrigPoly one = RationalTrigPoly::constant(Rational(1));
  if (!(transfer_apply(w, one, 3) == one)) d.fail("T_W 1 != 1");
  const double w0 = to_complex(w)(0.0).real();
  if (!(std::abs(w0 - 2.0 / 3.0) <= 1e-12)) d.fail("W_F(0) = " + num(w0, 15));
  if (lowpass_check(to_complex(w), 3)) d.fail("W_F reported low-pass");
  if (!lowpass_check(w_from_filter(haar_filter()), 2)) d.fail("Haar not low-pass");
  d.add("T_W 1 = 1 exactly, W_F(0) = " + num(w0, 15) + ", not low-pass; Haar low-pass");
  return d.done();
}

Outcome adjoint_invariance() {
  Detail d;
  std::mt19937_64 rng(1234);
  double worst = 0.0;
  double invariance = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TrigPoly m = random_poly(rng, 8);
    const TrigPoly f = random_poly(rng, 8);
    const TrigPoly g = random_poly(rng, 8);
    worst = std::max(worst, v_adjoint_check(m, f, g, 2));
    invariance = std::max(invariance, strong_invariance_check(g, 2));
    invariance = std::max(invariance, strong_invariance_check(f, 3));
  }
  d.add("adjoint residual " + num(worst, 3) + ", invariance " + num(invariance, 3));
  if (!(worst <= 1e-12)) d.fail("adjoint residual above 1e-12");
  if (invariance != 0.0) d.fail("strong invariance not exactly zero");
  return d.done();
}

Outcome determinism() {
  Detail d;
  const std::string graph = std::string(SPECTRAL_WALKS_TEST_DATA) + "/cycle4.json";
  const std::vector<std::vector<std::string>> commands{
      {"walk", "sim", "--graph", graph, "--steps", "12", "--paths", "20000", "--seed", "5"},
      {"walk", "sim", "--graph", graph, "--steps", "6", "--paths", "5000", "--seed", "5", "--out", "json"},
      {"walk", "harmonic", "--ruin", "6", "--paths", "20000", "--seed", "9"},
      {"solenoid", "walk", "--w", "haar", "--steps", "16", "--paths", "5000", "--seed", "3"},
      {"solenoid", "walk", "--w", "half", "--steps", "16", "--paths", "5000", "--start", "3/8"},
      {"spectra", "gram", "--words", "0,01,1,110"},
      {"spectra", "reciprocity", "--words", "0,1,00,11,010"},
      {"wavelet", "tightness", "--coeffs", "0.5,0.5", "--t", "0.1,0.3", "--frame", "64"},
      {"tree", "encode", "--words", "0110,1,0"},
      {"verify", "all", "--quick"}};
  std::size_t differing = 0;
  for (const auto& args : commands) {
    std::string first;
    for (const char* threads : {"1", "1", "4"}) {
      ::setenv("SPECTRAL_WALKS_THREADS", threads, 1);
      std::ostringstream out;
      std::ostringstream err;
      cli::run(args, out, err);
      if (first.empty()) {
        first = out.str();
        if (first.empty()) d.fail(args[0] + " " + args[1] + " produced no output: " + err.str());
      } else if (out.str() != first) {
        ++differing;
        d.fail(args[0] + " " + args[1] + " output differs");
      }
    }
  }
  ::unsetenv("SPECTRAL_WALKS_THREADS");
  d.add(std::to_string(commands.size()) + " commands, 3 runs each (threads 1, 1, 4)");
  return d.done();
}

}  // namespace

int main() {
  const unsigned threads = cli::worker_threads();
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"dipole kernel exactness", 5.0, dipole_kernel},
      {"Gram identity", 10.0, gram_identity},
      {"reciprocity", 0.0, reciprocity},
      {"matrix examples", 0.0, matrix_examples},
      {"spectral growth", 30.0, spectral_growth_nested},
      {"KL orthogonality", 0.0, kl_orthogonality},
      {"covariance identity", 60.0, [threads] { return covariance_identity(threads); }},
      {"harmonic <=> martingale", 0.0, [threads] { return harmonic_martingale(threads); }},
      {"wavelet criteria", 0.0, wavelet_criteria},
      {"Cantor filter", 0.0, cantor_filter_criteria},
      {"adjoint and invariance", 0.0, adjoint_invariance},
      {"determinism", 0.0, determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.passed = false;
      o.detail += "; runtime over " + num(c.budget_s) + " s";
    }
    failures += o.passed ? 0 : 1;
    std::printf("%-4s %-26s %s (%.2f s) %s\n", (std::to_string(i + 1) + ".").c_str(), c.name,
                o.passed ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
