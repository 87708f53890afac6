#include "spectral_walks/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace spectral_walks {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

SymmetricEigen eigh(const Eigen::MatrixXd& m, const JacobiOptions& options) {
  if (m.rows() != m.cols()) throw NotSymmetricError("matrix is not square");
  const Eigen::Index n = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw NotSymmetricError("matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = options.tolerance * a.norm();
  int sweeps = 0;
  while (off_diagonal_norm(a) > target) {
    if (sweeps == options.max_sweeps) throw std::runtime_error("Jacobi iteration did not converge");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    ++sweeps;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweeps;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = a(src, src);
    Eigen::VectorXd col = v.col(src);
    col.normalize();
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(col(k)) > 1e-12) {
        if (col(k) < 0.0) col = -col;
        break;
      }
    }
    out.vectors.col(j) = col;
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> eigen_clusters(const Eigen::VectorXd& values, double gap) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto n = static_cast<std::size_t>(values.size());
  std::size_t first = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || std::abs(values(static_cast<Eigen::Index>(i - 1)) - values(static_cast<Eigen::Index>(i))) >= gap) {
      out.emplace_back(first, i);
      first = i;
    }
  }
  return out;
}

}  // namespace spectral_walks
