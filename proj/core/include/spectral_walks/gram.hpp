#pragma once

// Gram matrices of tree dipoles and their spectral analysis: the
// Karhunen–Loève system, Rayleigh quotients, reciprocity between the energy
// Laplacian and the Gram matrix, and spectral growth.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spectral_walks/graph.hpp"
#include "spectral_walks/jacobi.hpp"
#include "spectral_walks/tree.hpp"

namespace spectral_walks {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

class GramError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejects empty families, duplicates, the origin and mixed alphabets.
void validate_family(std::span<const Word> family);

/// M_{xy} = <v_x, v_y>_E = #(γ(x) ∩ γ(y)), exact.
IntMatrix gram_matrix(std::span<const Word> family);

/// The same matrix computed from the energy form on the depth-truncated
/// tree (independent of the path-counting kernel).
Eigen::MatrixXd energy_gram_matrix(std::span<const Word> family, std::size_t depth);

/// A Gram matrix together with its eigendecomposition.
struct GramSpectrum {
  std::vector<Word> words;  ///< empty when built from a bare matrix
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;   ///< descending
  Eigen::MatrixXd eigenvectors;  ///< orthonormal columns ξ_j

  static GramSpectrum from_words(std::vector<Word> words);
  static GramSpectrum from_matrix(const Eigen::MatrixXd& m);

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
  /// <ξ_j> = Σ_x ξ_j(x).
  double mean(std::size_t j) const;
  bool has_words() const { return !words.empty(); }
};

/// Karhunen–Loève vector over F: w_k = (1/λ_k) Σ ξ_k(x) v_x, or the
/// unit-energy u_k = √λ_k · w_k when `normalized`.
struct KLVector {
  std::size_t index = 0;
  std::vector<double> coefficients;  ///< coefficient of v_x, in family order
  double lambda = 0.0;
  bool normalized = false;

  /// Σ_x coefficients[x] · v_x(z).
  double evaluate(std::span<const Word> family, const Word& z) const;
};

std::vector<KLVector> kl_vectors(const GramSpectrum& gs, bool normalized = false);

/// Σ_x coeffs[x] · v_x as a function on the depth-truncated tree.
VertexFunction<double> dipole_combination(std::span<const Word> family, std::span<const double> coeffs,
                                          std::size_t depth);

/// Energy inner products <w_j, w_k>_E (or <u_j, u_k>_E) on the truncated tree.
Eigen::MatrixXd kl_gram_check(const GramSpectrum& gs, std::size_t depth, bool normalized = false);

/// <u, Δu>_E / ‖u‖²_E. Throws std::domain_error for zero energy.
double rayleigh_energy(const WeightedGraph& g, const VertexFunction<double>& u);

/// ‖ξ‖² / <ξ, Mξ>.
double inverse_rayleigh(const Eigen::MatrixXd& m, const Eigen::VectorXd& xi);

struct ReciprocityPair {
  double lambda = 0.0;        ///< eigenvalue whose eigenvector was projected
  double energy_route = 0.0;  ///< Rayleigh quotient of Δ on Σ ξ_x v_x
  double matrix_route = 0.0;  ///< ‖ξ‖² / <ξ, M ξ>
};

/// For each eigenvector of M_F with its mean projected out (skipped when the
/// projection vanishes), both routes to the energy Rayleigh quotient.
std::vector<ReciprocityPair> reciprocity_spectrum(std::span<const Word> family, std::size_t depth);

struct RValue {
  double lambda = 0.0;
  double r = 0.0;     ///< (1/λ)(1 + <ξ>²)
  double mean = 0.0;  ///< <ξ>
};

std::vector<RValue> r_function(const GramSpectrum& gs);

/// <u_j, Δu_k>_E computed on the truncated tree.
Eigen::MatrixXd kl_laplacian_energy(const GramSpectrum& gs, std::size_t depth);
/// (δ_jk + <ξ_j><ξ_k>) / √(λ_j λ_k).
Eigen::MatrixXd kl_laplacian_formula(const GramSpectrum& gs);

/// Σ_j <ξ_j>², which equals #F.
double spectral_growth(const GramSpectrum& gs);
double spectral_growth(std::span<const Word> family);

/// True iff the energy-route Gram matrix has min eigenvalue > 1e-10·‖M‖.
bool linear_independence_check(std::span<const Word> family, std::size_t depth);

}  // namespace spectral_walks
