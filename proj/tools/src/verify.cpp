#include <cmath>

#include "spectral_walks/cli/commands.hpp"
#include "spectral_walks/gram.hpp"
#include "spectral_walks/graph.hpp"
#include "spectral_walks/jacobi.hpp"
#include "spectral_walks/wavelet.hpp"

namespace spectral_walks::cli {

namespace {

Check count_check(std::string name, std::int64_t failures) {
  return tolerance_check(std::move(name), static_cast<double>(failures), 0.0, 0.0);
}

}  // namespace

void verify_all(bool quick, const Context&, Report& r) {
  const std::size_t max_len = quick ? 4 : 6;
  const std::size_t depth = max_len + 2;
  const ExactGraph tree = exact_tree_graph(depth);
  const auto words = words_up_to(max_len);

  std::int64_t defects = 0;
  std::int64_t norms = 0;
  std::vector<VertexFunction<Rational>> dipoles;
  for (const Word& x : words) {
    for (const auto& v : dipole_defect(x, depth)) {
      if (v != Rational(0)) {
        ++defects;
        break;
      }
    }
    dipoles.push_back(dipole_function<Rational>(x, depth));
    if (energy_inner(tree, dipoles.back(), dipoles.back()) != Rational(static_cast<std::int64_t>(x.length()))) ++norms;
  }
  r.checks.push_back(count_check("dipole defect Δv_x - (δ_x - δ_o) nonzero", defects));
  r.checks.push_back(count_check("energy norm of v_x differs from l(x)", norms));

  std::int64_t gram = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i; j < words.size(); ++j) {
      if (energy_inner(tree, dipoles[i], dipoles[j]) != Rational(dipole_value(words[i], words[j]))) ++gram;
    }
  }
  r.checks.push_back(count_check("energy Gram entry differs from shared prefix count", gram));

  const std::size_t enc_len = quick ? 8 : 12;
  std::int64_t nat = 0;
  std::int64_t canon = 0;
  for (const Word& w : words_up_to(enc_len, 2, true)) {
    if (encode_nat(w.prepend(0)) != 2 * encode_nat(w) || encode_nat(w.prepend(1)) != 2 * encode_nat(w) + 1) ++nat;
    if (!w.is_origin() && encode_int(decode_int(encode_int(w))) != encode_int(w)) ++canon;
  }
  std::int64_t ints = 0;
  for (std::int64_t n = -(std::int64_t{1} << 11); n < (std::int64_t{1} << 11); ++n) {
    if (encode_int(decode_int(n)) != n) ++ints;
  }
  r.checks.push_back(count_check("prepend law of the natural encoding", nat));
  r.checks.push_back(count_check("integer decode of encode is not value-preserving", canon));
  r.checks.push_back(count_check("integer encode of decode is not the identity", ints));

  const std::size_t growth_depth = quick ? 3 : 5;
  for (std::size_t d = 1; d <= growth_depth; ++d) {
    const auto family = words_up_to(d);
    r.checks.push_back(tolerance_check("spectral growth depth " + std::to_string(d), spectral_growth(family),
                                       static_cast<double>(family.size()), 1e-8));
  }

  Eigen::MatrixXd diag13 = Eigen::MatrixXd::Zero(2, 2);
  diag13(0, 0) = 1.0;
  diag13(1, 1) = 3.0;
  const auto e = eigh(diag13);
  r.checks.push_back(tolerance_check("eigh diag(1,3) top eigenvalue", e.values(0), 3.0, 1e-12));
  r.checks.push_back(tolerance_check("eigh diag(1,3) bottom eigenvalue", e.values(1), 1.0, 1e-12));

  const RationalTrigPoly wf = cantor_filter();
  const bool preserves = transfer_apply(wf, RationalTrigPoly::constant(Rational(1)), 3) == RationalTrigPoly::constant(Rational(1));
  r.checks.push_back(count_check("Cantor filter transfer of one is not one", preserves ? 0 : 1));
  const RationalTrigPoly haar_w{{-1, Rational(1, 4)}, {0, Rational(1, 2)}, {1, Rational(1, 4)}};
  const bool haar_preserves =
      transfer_apply(haar_w, RationalTrigPoly::constant(Rational(1)), 2) == RationalTrigPoly::constant(Rational(1));
  r.checks.push_back(count_check("Haar transfer of one is not one", haar_preserves ? 0 : 1));

  r.checks.push_back(tolerance_check("Haar QMF residual", qmf_check(haar_filter()).max_residual, 0.0, 1e-10));
  r.checks.push_back(tolerance_check("four-tap QMF residual", qmf_check(daubechies4_filter()).max_residual, 0.0, 1e-10));

  const TrigPoly probe{{-3, {0.25, -0.5}}, {0, 1.0}, {2, {0.125, 0.75}}, {4, -0.5}, {6, {0.0, 0.3}}};
  r.checks.push_back(tolerance_check("strong invariance d=2", strong_invariance_check(probe, 2), 0.0, 0.0));
  r.checks.push_back(tolerance_check("strong invariance d=3", strong_invariance_check(probe, 3), 0.0, 0.0));
}

}  // namespace spectral_walks::cli
