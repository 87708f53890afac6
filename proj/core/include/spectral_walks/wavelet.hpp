#pragma once

// Wavelet filters: QMF conditions, the filter function W = |m|², the
// transfer operator T_W, the cascade approximation of φ̂, and the
// tightness (orthonormal-translates) criterion.

#include <complex>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include "spectral_walks/trig_poly.hpp"
#include "spectral_walks/tree.hpp"

namespace spectral_walks {

/// Filter taps a_k for k = first_index, first_index+1, ….
struct FilterCoeffs {
  std::vector<std::complex<double>> a;
  int first_index = 0;
  int degree = 2;

  static FilterCoeffs real(const std::vector<double>& taps, int first_index = 0, int degree = 2);

  std::complex<double> at(int k) const;
  int last_index() const { return first_index + static_cast<int>(a.size()) - 1; }
};

FilterCoeffs haar_filter();
/// Four-tap orthonormal filter with one vanishing moment beyond Haar.
FilterCoeffs daubechies4_filter();
/// a_0 = a_2 = ½.
FilterCoeffs stretched_haar_filter();

/// {"a":[…], "degree":2}; taps start at index 0 unless "first" is given.
FilterCoeffs parse_filter_json(std::string_view text);
FilterCoeffs load_filter_json(const std::filesystem::path& path);

struct QmfReport {
  std::vector<std::pair<int, std::complex<double>>> orthogonality;  ///< (l, Σ ā_k a_{k+dl} − δ_{0,l}/d)
  std::complex<double> normalization;                              ///< Σ a_k − 1
  double max_residual = 0.0;
  bool passed = false;  ///< every residual ≤ 1e-10
};

QmfReport qmf_check(const FilterCoeffs& f);

/// m(t) = Σ a_k e_k(t).
TrigPoly filter_symbol(const FilterCoeffs& f);
/// W = m · conj(m) = |m|².
TrigPoly w_from_filter(const FilterCoeffs& f);

/// W_F = |1 + z²|² / 6 with coefficients {0: 1/3, ±2: 1/6}, scaling degree 3.
RationalTrigPoly cantor_filter();

/// W(0) = 1 and W(j/d) = 0 for j = 1 … d−1, each to `tolerance`.
bool lowpass_check(const TrigPoly& w, int d, double tolerance = 1e-12);

/// φ̂_J(t) = Π_{j=1}^{J} m(t / d^j).
std::complex<double> cascade_phihat(const FilterCoeffs& f, double t, int depth);

/// Σ_{|n|≤K} |φ̂_J(t+n)|².
double periodization(const FilterCoeffs& f, double t, int k_max, int depth);
/// 1 − periodization: near zero iff the integer translates are orthonormal.
double tightness_defect(const FilterCoeffs& f, double t, int k_max, int depth);

/// Parseval-frame test Σ_k |<φ(·−k), φ>|² versus ‖φ‖², both evaluated from
/// the periodization P by midpoint quadrature: ∫P² and ∫P over [0, 1).
struct FrameReport {
  double frame_sum = 0.0;
  double norm2 = 0.0;
  double defect = 0.0;  ///< frame_sum − norm2
};
FrameReport parseval_frame_check(const FilterCoeffs& f, int k_max, int depth, int quadrature_points);

/// |φ̂_J(t + τ⁰(w))|² with τ⁰ the integer encoding of words.
double pt_cylinder_mass(const FilterCoeffs& f, double t, const Word& w, int depth);

/// |∫ (1/d) Σ_branches f − ∫ f|, exact on coefficients.
double strong_invariance_check(const TrigPoly& f, int d);

/// |<Vf, g> − <f, V*g>| with Vf = m·(f∘σ), V*g = (1/d) T_{conj m} g.
double v_adjoint_check(const TrigPoly& m, const TrigPoly& f, const TrigPoly& g, int d = 2);

}  // namespace spectral_walks
