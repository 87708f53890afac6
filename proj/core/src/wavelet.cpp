#include "spectral_walks/wavelet.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spectral_walks {

FilterCoeffs FilterCoeffs::real(const std::vector<double>& taps, int first_index, int degree) {
  FilterCoeffs f;
  f.a.assign(taps.begin(), taps.end());
  f.first_index = first_index;
  f.degree = degree;
  return f;
}

std::complex<double> FilterCoeffs::at(int k) const {
  if (k < first_index || k > last_index()) return {};
  return a[static_cast<std::size_t>(k - first_index)];
}

FilterCoeffs haar_filter() { return FilterCoeffs::real({0.5, 0.5}); }

FilterCoeffs daubechies4_filter() {
  const double s = std::sqrt(3.0);
  return FilterCoeffs::real({(1.0 + s) / 8.0, (3.0 + s) / 8.0, (3.0 - s) / 8.0, (1.0 - s) / 8.0});
}

FilterCoeffs stretched_haar_filter() { return FilterCoeffs::real({0.5, 0.0, 0.5}); }

FilterCoeffs parse_filter_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid filter JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("a") || !doc["a"].is_array() || doc["a"].empty()) {
    throw std::invalid_argument("filter JSON needs a non-empty array 'a'");
  }
  FilterCoeffs f;
  for (const auto& v : doc["a"]) {
    if (v.is_number()) {
      f.a.emplace_back(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      f.a.emplace_back(v[0].get<double>(), v[1].get<double>());
    } else {
      throw std::invalid_argument("filter taps must be numbers or [re, im] pairs");
    }
  }
  f.degree = doc.value("degree", 2);
  f.first_index = doc.value("first", 0);
  if (f.degree < 2) throw std::invalid_argument("filter degree must be at least 2");
  return f;
}

FilterCoeffs load_filter_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open filter file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_filter_json(buf.str());
}

QmfReport qmf_check(const FilterCoeffs& f) {
  QmfReport r;
  const int d = f.degree;
  const int span = f.last_index() - f.first_index;
  for (int l = -span / d; l <= span / d; ++l) {
    std::complex<double> s{};
    for (int k = f.first_index; k <= f.last_index(); ++k) s += std::conj(f.at(k)) * f.at(k + d * l);
    const std::complex<double> residual = s - (l == 0 ? 1.0 / d : 0.0);
    r.orthogonality.emplace_back(l, residual);
    r.max_residual = std::max(r.max_residual, std::abs(residual));
  }
  std::complex<double> total{};
  for (const auto& c : f.a) total += c;
  r.normalization = total - 1.0;
  r.max_residual = std::max(r.max_residual, std::abs(r.normalization));
  r.passed = r.max_residual <= 1e-10;
  return r;
}

TrigPoly filter_symbol(const FilterCoeffs& f) {
  TrigPoly m;
  for (int k = f.first_index; k <= f.last_index(); ++k) m.add(k, f.at(k));
  return m;
}

TrigPoly w_from_filter(const FilterCoeffs& f) {
  const TrigPoly m = filter_symbol(f);
  return m * m.conj();
}

RationalTrigPoly cantor_filter() {
  const RationalTrigPoly one_plus_z2{{0, Rational(1)}, {2, Rational(1)}};
  return Rational(1, 6) * (one_plus_z2 * one_plus_z2.conj());
}

bool lowpass_check(const TrigPoly& w, int d, double tolerance) {
  if (d < 2) throw std::invalid_argument("scaling degree must be at least 2");
  if (std::abs(w(0.0) - 1.0) > tolerance) return false;
  for (int j = 1; j < d; ++j) {
    if (std::abs(w(static_cast<double>(j) / d)) > tolerance) return false;
  }
  return true;
}

std::complex<double> cascade_phihat(const FilterCoeffs& f, double t, int depth) {
  if (depth < 1) throw std::invalid_argument("cascade depth must be at least 1");
  const TrigPoly m = filter_symbol(f);
  std::complex<double> prod{1.0, 0.0};
  double scale = 1.0;
  for (int j = 1; j <= depth; ++j) {
    scale /= f.degree;
    prod *= m(t * scale);
  }
  return prod;
}

double periodization(const FilterCoeffs& f, double t, int k_max, int depth) {
  if (k_max < 1) throw std::invalid_argument("K must be at least 1");
  CompensatedSum<double> acc;
  for (int n = -k_max; n <= k_max; ++n) acc.add(std::norm(cascade_phihat(f, t + n, depth)));
  return acc.value();
}

double tightness_defect(const FilterCoeffs& f, double t, int k_max, int depth) {
  return 1.0 - periodization(f, t, k_max, depth);
}

FrameReport parseval_frame_check(const FilterCoeffs& f, int k_max, int depth, int quadrature_points) {
  if (quadrature_points < 1) throw std::invalid_argument("need at least one quadrature point");
  CompensatedSum<double> p1;
  CompensatedSum<double> p2;
  for (int i = 0; i < quadrature_points; ++i) {
    const double t = (i + 0.5) / quadrature_points;
    const double p = periodization(f, t, k_max, depth);
    p1.add(p);
    p2.add(p * p);
  }
  FrameReport r;
  r.norm2 = p1.value() / quadrature_points;
  r.frame_sum = p2.value() / quadrature_points;
  r.defect = r.frame_sum - r.norm2;
  return r;
}

double pt_cylinder_mass(const FilterCoeffs& f, double t, const Word& w, int depth) {
  return std::norm(cascade_phihat(f, t + static_cast<double>(encode_int(w)), depth));
}

double strong_invariance_check(const TrigPoly& f, int d) {
  return std::abs(branch_average(f, d).integral() - f.integral());
}

double v_adjoint_check(const TrigPoly& m, const TrigPoly& f, const TrigPoly& g, int d) {
  const TrigPoly vf = m * f.compose_multiply(d);
  const TrigPoly v_star_g = branch_average(m.conj() * g, d);
  return std::abs(inner(vf, g) - inner(f, v_star_g));
}

}  // namespace spectral_walks
