#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "spectral_walks/gram.hpp"

using namespace spectral_walks;

namespace {

std::vector<Word> parse_all(std::initializer_list<const char*> ws) {
  std::vector<Word> out;
  for (const char* s : ws) out.push_back(Word::parse(s));
  return out;
}

std::vector<Word> random_family(std::mt19937_64& rng, std::size_t max_size, std::size_t max_len) {
  const auto pool = words_up_to(max_len);
  std::set<std::size_t> picks;
  const std::size_t size = 1 + rng() % max_size;
  while (picks.size() < size) picks.insert(rng() % pool.size());
  std::vector<Word> out;
  for (auto i : picks) out.push_back(pool[i]);
  return out;
}

double closed_form_root(double m, double sign) {
  return (m + 1.0 + sign * std::sqrt((m + 1.0) * (m + 1.0) - 4.0 * (m - 1.0))) / 2.0;
}

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_SUITE("gram_spectra") {
  TEST_CASE("Gram matrix of a short chain") {
    const auto m = gram_matrix(parse_all({"1", "11"}));
    CHECK(m(0, 0) == 1);
    CHECK(m(0, 1) == 1);
    CHECK(m(1, 0) == 1);
    CHECK(m(1, 1) == 2);
    const auto m3 = gram_matrix(parse_all({"1", "11", "111"}));
    CHECK(m3(2, 2) == 3);
    CHECK(m3(1, 2) == 2);
  }

  TEST_CASE("prefix-count and energy routes agree on random families") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
      const auto family = random_family(rng, 10, 5);
      const Eigen::MatrixXd exact = gram_matrix(family).cast<double>();
      CHECK((energy_gram_matrix(family, 6) - exact).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(linear_independence_check(family, 6));
    }
  }

  TEST_CASE("family validation") {
    CHECK_THROWS_AS(validate_family({}), GramError);
    CHECK_THROWS_AS(validate_family(parse_all({"1", "1"})), GramError);
    CHECK_THROWS_AS(validate_family(std::vector<Word>{Word::origin()}), GramError);
    const std::vector<Word> mixed{Word::parse("1"), Word::parse("2", 3)};
    CHECK_THROWS_AS(validate_family(mixed), GramError);
  }

  TEST_CASE("worked 2x2 examples: eigenvalues and R values") {
    auto gs = GramSpectrum::from_matrix(mat2(1, 0, 0, 3));
    auto r = r_function(gs);
    CHECK(r[0].lambda == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r[0].r == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r[1].lambda == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r[1].r == doctest::Approx(2.0).epsilon(1e-12));

    gs = GramSpectrum::from_matrix(mat2(2, 1, 1, 2));
    r = r_function(gs);
    CHECK(r[0].r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r[1].r == doctest::Approx(1.0).epsilon(1e-12));

    gs = GramSpectrum::from_matrix(mat2(3, 3, 3, 7));
    CHECK(gs.eigenvalues(0) == doctest::Approx(5.0 + std::sqrt(13.0)).epsilon(1e-12));
    CHECK(gs.eigenvalues(1) == doctest::Approx(5.0 - std::sqrt(13.0)).epsilon(1e-12));

    gs = GramSpectrum::from_matrix(mat2(3, 1, 1, 4));
    CHECK(gs.eigenvalues(0) == doctest::Approx((7.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(gs.eigenvalues(1) == doctest::Approx((7.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  }

  TEST_CASE("[[1,1],[1,m]]: closed-form roots and R(λ) = 1/λ + λ/(1+(λ-1)²)") {
    for (double m : {2.0, 10.0, 100.0, 1000.0}) {
      const auto gs = GramSpectrum::from_matrix(mat2(1, 1, 1, m));
      const double lp = closed_form_root(m, 1.0);
      const double lm = closed_form_root(m, -1.0);
      CHECK(std::abs(gs.eigenvalues(0) - lp) <= 1e-9);
      CHECK(std::abs(gs.eigenvalues(1) - lm) <= 1e-9);
      CHECK(lp * lm == doctest::Approx(m - 1.0).epsilon(1e-12));
      // the lower root approaches 1 from below
      CHECK(lm < 1.0);
      const auto r = r_function(gs);
      for (const auto& rv : r) {
        const double formula = 1.0 / rv.lambda + rv.lambda / (1.0 + (rv.lambda - 1.0) * (rv.lambda - 1.0));
        CHECK(rv.r == doctest::Approx(formula).epsilon(1e-10));
      }
    }
    const auto r = r_function(GramSpectrum::from_matrix(mat2(1, 1, 1, 1000)));
    CHECK(r[1].r == doctest::Approx(2.0).epsilon(1e-8));
  }

  TEST_CASE("spectral growth equals #F, against a reference eigensolver") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const auto family = random_family(rng, 16, 5);
      const auto m = gram_matrix(family).cast<double>().eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m);
      const double oracle = (Eigen::RowVectorXd::Ones(m.rows()) * ref.eigenvectors()).squaredNorm();
      const double growth = spectral_growth(family);
      CHECK(growth == doctest::Approx(oracle).epsilon(1e-10));
      CHECK(std::abs(growth - static_cast<double>(family.size())) <= 1e-8);
    }
    for (std::size_t d = 1; d <= 5; ++d) {
      CHECK(std::abs(spectral_growth(words_up_to(d)) - static_cast<double>(words_up_to(d).size())) <= 1e-8);
    }
  }

  TEST_CASE("Karhunen-Loeve vectors are energy-orthogonal") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 8; ++trial) {
      const auto family = random_family(rng, 16, 4);
      const auto gs = GramSpectrum::from_words(family);
      const std::size_t n = gs.size();
      const Eigen::MatrixXd w = kl_gram_check(gs, 5, false);
      const Eigen::MatrixXd expected = gs.eigenvalues.cwiseInverse().asDiagonal();
      CHECK((w - expected).cwiseAbs().maxCoeff() <= 1e-8);
      const Eigen::MatrixXd u = kl_gram_check(gs, 5, true);
      CHECK((u - Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK((kl_laplacian_energy(gs, 5) - kl_laplacian_formula(gs)).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }

  TEST_CASE("KL vectors evaluate as dipole combinations") {
    const auto family = parse_all({"0", "01", "1", "110"});
    const auto gs = GramSpectrum::from_words(family);
    const auto kl = kl_vectors(gs, true);
    const std::size_t depth = 4;
    for (const auto& k : kl) {
      CHECK(k.normalized);
      const auto f = dipole_combination(family, k.coefficients, depth);
      for (const auto& z : words_up_to(depth, 2, true)) {
        CHECK(k.evaluate(family, z) == doctest::Approx(f[tree_index(z)]).epsilon(1e-12));
      }
      CHECK(k.evaluate(family, Word::origin()) == 0.0);
    }
  }

  TEST_CASE("reciprocity for zero-sum coefficient vectors") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> z;
    const std::size_t depth = 6;
    const WeightedGraph tree = tree_graph(depth);
    for (int trial = 0; trial < 30; ++trial) {
      const auto family = random_family(rng, 16, 5);
      if (family.size() < 2) continue;
      Eigen::VectorXd xi(static_cast<Eigen::Index>(family.size()));
      for (auto& v : xi) v = z(rng);
      xi.array() -= xi.mean();
      const std::vector<double> coeffs(xi.data(), xi.data() + xi.size());
      const double energy = rayleigh_energy(tree, dipole_combination(family, coeffs, depth));
      const double matrix = inverse_rayleigh(gram_matrix(family).cast<double>(), xi);
      CHECK(std::abs(energy - matrix) <= 1e-9 * std::max(1.0, std::abs(matrix)));
    }
    for (const auto& p : reciprocity_spectrum(parse_all({"0", "1", "00", "11", "010"}), 4)) {
      CHECK(std::abs(p.energy_route - p.matrix_route) <= 1e-9);
    }
    CHECK_THROWS_AS(rayleigh_energy(tree, VertexFunction<double>(tree.size(), 2.0)), std::domain_error);
  }
}
