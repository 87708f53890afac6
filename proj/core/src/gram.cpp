#include "spectral_walks/gram.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace spectral_walks {

namespace {

std::size_t max_length(std::span<const Word> family) {
  std::size_t m = 0;
  for (const auto& w : family) m = std::max(m, w.length());
  return m;
}

void require_depth(std::span<const Word> family, std::size_t depth) {
  if (depth < max_length(family)) {
    throw GramError("truncation depth " + std::to_string(depth) + " below longest word length " +
                    std::to_string(max_length(family)));
  }
}

void require_words(const GramSpectrum& gs) {
  if (!gs.has_words()) throw GramError("operation needs a word family, not a bare matrix");
}

std::vector<VertexFunction<double>> kl_functions(const GramSpectrum& gs, std::size_t depth, bool normalized) {
  std::vector<VertexFunction<double>> out;
  for (const auto& kl : kl_vectors(gs, normalized)) {
    out.push_back(dipole_combination(gs.words, kl.coefficients, depth));
  }
  return out;
}

}  // namespace

void validate_family(std::span<const Word> family) {
  if (family.empty()) throw GramError("word family is empty");
  std::set<Word> seen;
  for (const auto& w : family) {
    if (w.is_origin()) throw GramError("the origin cannot index a dipole");
    if (w.arity() != family.front().arity()) throw GramError("words over different alphabets");
    if (!seen.insert(w).second) throw GramError("duplicate word '" + w.to_string() + "'");
  }
}

IntMatrix gram_matrix(std::span<const Word> family) {
  validate_family(family);
  const auto n = static_cast<Eigen::Index>(family.size());
  IntMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = dipole_value(family[static_cast<std::size_t>(i)], family[static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

Eigen::MatrixXd energy_gram_matrix(std::span<const Word> family, std::size_t depth) {
  validate_family(family);
  require_depth(family, depth);
  const WeightedGraph g = tree_graph(depth, family.front().arity());
  std::vector<VertexFunction<double>> dipoles;
  dipoles.reserve(family.size());
  for (const auto& w : family) dipoles.push_back(dipole_function<double>(w, depth));
  const auto n = static_cast<Eigen::Index>(family.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = energy_inner(g, dipoles[static_cast<std::size_t>(i)], dipoles[static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

GramSpectrum GramSpectrum::from_words(std::vector<Word> words) {
  const IntMatrix exact = gram_matrix(words);
  GramSpectrum gs = from_matrix(exact.cast<double>());
  gs.words = std::move(words);
  return gs;
}

GramSpectrum GramSpectrum::from_matrix(const Eigen::MatrixXd& m) {
  const SymmetricEigen e = eigh(m);
  GramSpectrum gs;
  gs.matrix = m;
  gs.eigenvalues = e.values;
  gs.eigenvectors = e.vectors;
  return gs;
}

double GramSpectrum::mean(std::size_t j) const { return eigenvectors.col(static_cast<Eigen::Index>(j)).sum(); }

double KLVector::evaluate(std::span<const Word> family, const Word& z) const {
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < family.size(); ++i) {
    acc.add(coefficients[i] * static_cast<double>(dipole_value(family[i], z)));
  }
  return acc.value();
}

std::vector<KLVector> kl_vectors(const GramSpectrum& gs, bool normalized) {
  std::vector<KLVector> out;
  out.reserve(gs.size());
  for (std::size_t k = 0; k < gs.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double lambda = gs.eigenvalues(kk);
    if (!(lambda > 0.0)) throw GramError("Gram matrix is not positive definite");
    const double scale = normalized ? 1.0 / std::sqrt(lambda) : 1.0 / lambda;
    KLVector kl;
    kl.index = k;
    kl.lambda = lambda;
    kl.normalized = normalized;
    kl.coefficients.resize(gs.size());
    for (std::size_t x = 0; x < gs.size(); ++x) {
      kl.coefficients[x] = scale * gs.eigenvectors(static_cast<Eigen::Index>(x), kk);
    }
    out.push_back(std::move(kl));
  }
  return out;
}

VertexFunction<double> dipole_combination(std::span<const Word> family, std::span<const double> coeffs,
                                          std::size_t depth) {
  if (coeffs.size() != family.size()) throw GramError("one coefficient per word required");
  require_depth(family, depth);
  const unsigned arity = family.empty() ? 2 : family.front().arity();
  const std::size_t n = tree_size(depth, arity);
  VertexFunction<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Word z = word_at(i, arity);
    CompensatedSum<double> acc;
    for (std::size_t x = 0; x < family.size(); ++x) {
      acc.add(coeffs[x] * static_cast<double>(dipole_value(family[x], z)));
    }
    u[i] = acc.value();
  }
  return u;
}

Eigen::MatrixXd kl_gram_check(const GramSpectrum& gs, std::size_t depth, bool normalized) {
  require_words(gs);
  require_depth(gs.words, depth);
  const WeightedGraph g = tree_graph(depth, gs.words.front().arity());
  const auto fs = kl_functions(gs, depth, normalized);
  const auto n = static_cast<Eigen::Index>(fs.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out(j, k) = energy_inner(g, fs[static_cast<std::size_t>(j)], fs[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

double rayleigh_energy(const WeightedGraph& g, const VertexFunction<double>& u) {
  const double norm2 = energy_inner(g, u, u);
  if (!(norm2 > 0.0)) throw std::domain_error("Rayleigh quotient of a zero-energy function");
  return energy_inner(g, u, laplacian_apply(g, u)) / norm2;
}

double inverse_rayleigh(const Eigen::MatrixXd& m, const Eigen::VectorXd& xi) {
  const double denom = xi.dot(m * xi);
  if (!(denom > 0.0)) throw std::domain_error("<xi, M xi> must be positive");
  return xi.squaredNorm() / denom;
}

std::vector<ReciprocityPair> reciprocity_spectrum(std::span<const Word> family, std::size_t depth) {
  validate_family(family);
  require_depth(family, depth);
  const GramSpectrum gs = GramSpectrum::from_words(std::vector<Word>(family.begin(), family.end()));
  const WeightedGraph g = tree_graph(depth, family.front().arity());
  std::vector<ReciprocityPair> out;
  const auto n = static_cast<Eigen::Index>(gs.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd xi = gs.eigenvectors.col(j);
    xi.array() -= xi.mean();
    if (xi.norm() < 1e-8) continue;
    xi.normalize();
    const std::vector<double> coeffs(xi.data(), xi.data() + xi.size());
    const auto u = dipole_combination(family, coeffs, depth);
    out.push_back({gs.eigenvalues(j), rayleigh_energy(g, u), inverse_rayleigh(gs.matrix, xi)});
  }
  return out;
}

std::vector<RValue> r_function(const GramSpectrum& gs) {
  std::vector<RValue> out;
  out.reserve(gs.size());
  for (std::size_t j = 0; j < gs.size(); ++j) {
    const double lambda = gs.eigenvalues(static_cast<Eigen::Index>(j));
    const double mean = gs.mean(j);
    out.push_back({lambda, (1.0 + mean * mean) / lambda, mean});
  }
  return out;
}

Eigen::MatrixXd kl_laplacian_energy(const GramSpectrum& gs, std::size_t depth) {
  require_words(gs);
  require_depth(gs.words, depth);
  const WeightedGraph g = tree_graph(depth, gs.words.front().arity());
  const auto fs = kl_functions(gs, depth, true);
  std::vector<VertexFunction<double>> lap;
  lap.reserve(fs.size());
  for (const auto& f : fs) lap.push_back(laplacian_apply(g, f));
  const auto n = static_cast<Eigen::Index>(fs.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out(j, k) = energy_inner(g, fs[static_cast<std::size_t>(j)], lap[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

Eigen::MatrixXd kl_laplacian_formula(const GramSpectrum& gs) {
  const auto n = static_cast<Eigen::Index>(gs.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double kron = j == k ? 1.0 : 0.0;
      out(j, k) = (kron + gs.mean(static_cast<std::size_t>(j)) * gs.mean(static_cast<std::size_t>(k))) /
                  std::sqrt(gs.eigenvalues(j) * gs.eigenvalues(k));
    }
  }
  return out;
}

double spectral_growth(const GramSpectrum& gs) {
  CompensatedSum<double> acc;
  for (std::size_t j = 0; j < gs.size(); ++j) acc.add(gs.mean(j) * gs.mean(j));
  return acc.value();
}

double spectral_growth(std::span<const Word> family) {
  return spectral_growth(GramSpectrum::from_words(std::vector<Word>(family.begin(), family.end())));
}

bool linear_independence_check(std::span<const Word> family, std::size_t depth) {
  const Eigen::MatrixXd m = energy_gram_matrix(family, depth);
  const SymmetricEigen e = eigh(m);
  return e.values(e.values.size() - 1) > 1e-10 * m.norm();
}

}  // namespace spectral_walks
