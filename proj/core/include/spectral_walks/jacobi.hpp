#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace spectral_walks {

class NotSymmetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm is at most tolerance·‖M‖_F.
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

/// Eigenpairs of a real symmetric matrix. Eigenvalues are sorted in
/// descending order; column j of `vectors` belongs to values(j) and has its
/// first non-negligible component positive.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations (row-by-row sweep order). Deterministic: the same
/// input always yields bit-identical output.
SymmetricEigen eigh(const Eigen::MatrixXd& m, const JacobiOptions& options = {});

/// Index ranges [first, last) of eigenvalues closer than `gap` to a
/// neighbour; eigenvectors are only meaningful per cluster.
std::vector<std::pair<std::size_t, std::size_t>> eigen_clusters(const Eigen::VectorXd& descending_values,
                                                                 double gap = 1e-9);

}  // namespace spectral_walks
