#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "spectral_walks/jacobi.hpp"

using namespace spectral_walks;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = z(rng);
  }
  return a;
}

}  // namespace

TEST_SUITE("jacobi") {
  TEST_CASE("small worked matrices") {
    Eigen::MatrixXd d(2, 2);
    d << 1, 0, 0, 3;
    auto e = eigh(d);
    CHECK(e.values(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.values(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.vectors(1, 0) == doctest::Approx(1.0));

    Eigen::MatrixXd m(2, 2);
    m << 2, 1, 1, 2;
    e = eigh(m);
    CHECK(e.values(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.values(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.vectors(0, 0) == doctest::Approx(std::sqrt(0.5)));
    CHECK(e.vectors(0, 1) == doctest::Approx(std::sqrt(0.5)));
    CHECK(e.vectors(1, 1) == doctest::Approx(-std::sqrt(0.5)));
  }

  TEST_CASE("agrees with a reference eigensolver on random matrices") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 24);
      const Eigen::MatrixXd a = random_symmetric(rng, n);
      const auto e = eigh(a);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
      const Eigen::VectorXd ref_desc = ref.eigenvalues().reverse();
      CHECK((e.values - ref_desc).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + a.norm()));
      // orthonormal vectors that diagonalize
      CHECK((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((a * e.vectors - e.vectors * e.values.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + a.norm()));
      for (Eigen::Index j = 1; j < n; ++j) CHECK(e.values(j - 1) >= e.values(j));
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          if (std::abs(e.vectors(i, j)) > 1e-12) {
            CHECK(e.vectors(i, j) > 0.0);
            break;
          }
        }
      }
    }
  }

  TEST_CASE("deterministic: repeated solves are bit-identical") {
    std::mt19937_64 rng(7);
    const Eigen::MatrixXd a = random_symmetric(rng, 12);
    const auto e1 = eigh(a);
    const auto e2 = eigh(a);
    CHECK(e1.values == e2.values);
    CHECK(e1.vectors == e2.vectors);
  }

  TEST_CASE("degenerate spectra give an orthonormal cluster basis") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
    a(3, 3) = 5.0;
    const auto e = eigh(a);
    const auto clusters = eigen_clusters(e.values);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].second - clusters[0].first == 1);
    CHECK(clusters[1].second - clusters[1].first == 3);
    CHECK((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
  }

  TEST_CASE("rejects non-symmetric and empty input") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 0, 1;
    CHECK_THROWS_AS(eigh(a), NotSymmetricError);
    CHECK_THROWS_AS(eigh(Eigen::MatrixXd(2, 3)), NotSymmetricError);
  }
}
