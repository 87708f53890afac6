#include <algorithm>
#include <cmath>
#include <filesystem>

#include "spectral_walks/cli/commands.hpp"
#include "spectral_walks/solenoid.hpp"
#include "spectral_walks/wavelet.hpp"

namespace spectral_walks::cli {

namespace {

FilterCoeffs filter_from(const WaveletOptions& o) {
  if (o.coeffs.empty() == o.filter.empty()) throw InputError("give exactly one of --coeffs or --filter");
  if (!o.filter.empty()) {
    try {
      return load_filter_json(o.filter);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (o.degree < 2 || o.degree > 16) throw InputError("--degree must be in [2, 16]");
  return FilterCoeffs::real(o.coeffs, o.first, o.degree);
}

}  // namespace

void wavelet_qmf(const WaveletOptions& o, const Context&, Report& r) {
  const FilterCoeffs f = filter_from(o);
  const QmfReport q = qmf_check(f);
  auto& t = r.table("orthogonality", {"l", "residual_re", "residual_im"});
  for (const auto& [l, res] : q.orthogonality) t.row({static_cast<std::int64_t>(l), res.real(), res.imag()});
  r.table("normalization", {"residual_re", "residual_im"}).row({q.normalization.real(), q.normalization.imag()});
  r.checks.push_back(tolerance_check("qmf max residual", q.max_residual, 0.0, 1e-10));
}

void wavelet_tightness(const WaveletOptions& o, const Context&, Report& r) {
  const FilterCoeffs f = filter_from(o);
  if (o.k_max < 1 || o.k_max > 1000000) throw InputError("--K must be in [1, 1e6]");
  if (o.depth < 1 || o.depth > 60) throw InputError("--depth must be in [1, 60]");
  if (o.t.empty()) throw InputError("--t needs at least one point");
  auto& t = r.table("tightness", {"t", "periodization", "defect"});
  double lowest = 1.0;
  for (double x : o.t) {
    if (!std::isfinite(x)) throw InputError("--t must be finite");
    const double p = periodization(f, x, o.k_max, o.depth);
    lowest = std::min(lowest, 1.0 - p);
    t.row({x, p, 1.0 - p});
  }
  Check bessel = tolerance_check("min defect (Bessel bound)", lowest, 0.0, 0.0);
  bessel.passed = lowest >= -1e-6;
  bessel.sigmas = bessel.passed ? 0.0 : std::numeric_limits<double>::infinity();
  r.checks.push_back(bessel);
  if (o.frame > 0) {
    if (o.frame > 65536) throw InputError("--frame must be at most 65536");
    const FrameReport fr = parseval_frame_check(f, o.k_max, o.depth, o.frame);
    r.table("frame", {"frame_sum", "norm2", "defect"}).row({fr.frame_sum, fr.norm2, fr.defect});
  }
}

void wavelet_cantor(const WaveletOptions& o, const Context&, Report& r) {
  const RationalTrigPoly w = cantor_filter();
  auto& wt = r.table("w_coefficients", {"k", "exact", "value"});
  for (const auto& [k, c] : w.coefficients()) wt.row({static_cast<std::int64_t>(k), c.to_string(), c.to_double()});
  const RationalTrigPoly t1 = transfer_apply(w, RationalTrigPoly::constant(Rational(1)), 3);
  auto& tt = r.table("transfer_of_one", {"k", "exact"});
  for (const auto& [k, c] : t1.coefficients()) tt.row({static_cast<std::int64_t>(k), c.to_string()});
  const TrigPoly wc = to_complex(w);
  const double w0 = wc(0.0).real();
  const bool lowpass = lowpass_check(wc, 3);
  r.table("lowpass", {"w_at_0", "lowpass"}).row({w0, lowpass});
  if (o.check) {
    r.checks.push_back(tolerance_check("transfer of one equals one", t1 == RationalTrigPoly::constant(Rational(1)) ? 1.0 : 0.0, 1.0, 0.0));
    r.checks.push_back(tolerance_check("W_F(0)", w0, 2.0 / 3.0, 1e-12));
    r.checks.push_back(tolerance_check("W_F is not low-pass", lowpass ? 1.0 : 0.0, 0.0, 0.0));
  }
}

namespace {

TrigPoly walk_filter(const std::string& name) {
  if (name == "haar") return w_from_filter(haar_filter());
  if (name == "half") return TrigPoly::constant(0.5);
  if (!std::filesystem::exists(name)) throw InputError("--w must be haar, half, or a filter JSON file");
  try {
    const FilterCoeffs f = load_filter_json(name);
    if (f.degree != 2) throw InputError("solenoid walks need a degree-2 filter");
    return w_from_filter(f);
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

DyadicAngle parse_angle(const std::string& text) {
  // num/2^m, e.g. 3/8
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) throw std::invalid_argument("missing '/'");
    const std::uint64_t num = std::stoull(text.substr(0, slash));
    const std::uint64_t den = std::stoull(text.substr(slash + 1));
    if (den == 0 || (den & (den - 1)) != 0) throw std::invalid_argument("denominator must be a power of two");
    unsigned level = 0;
    while ((std::uint64_t{1} << level) < den) ++level;
    return DyadicAngle(num, level);
  } catch (const std::exception& e) {
    throw InputError("bad --start '" + text + "': " + e.what());
  }
}

TrigPoly cosine(int k) { return TrigPoly{{k, 0.5}, {-k, 0.5}}; }

}  // namespace

void solenoid_walk_cmd(const SolenoidOptions& o, const Context& ctx, Report& r) {
  const TrigPoly w = walk_filter(o.w);
  if (o.steps < 2 || o.steps > 60) throw InputError("--steps must be in [2, 60]");
  if (o.paths < 2 || o.paths > 100000000) throw InputError("--paths must be in [2, 1e8]");
  if (o.bins < 1 || o.bins > 4096) throw InputError("--bins must be in [1, 4096]");
  SolenoidStart start = UniformGrid{o.start_level};
  if (!o.start.empty()) start = parse_angle(o.start);
  SolenoidEnsemble ens;
  try {
    ens = solenoid_walk(w, o.steps, o.paths, ctx.seed, start, ctx.threads);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  auto& ht = r.table("final_histogram", {"bin_start", "bin_end", "frequency"});
  std::vector<double> counts(static_cast<std::size_t>(o.bins), 0.0);
  for (std::size_t p = 0; p < ens.n_paths; ++p) {
    const auto b = static_cast<std::size_t>(ens.at(p, o.steps).to_double() * o.bins);
    counts[std::min(b, counts.size() - 1)] += 1.0;
  }
  for (int b = 0; b < o.bins; ++b) {
    ht.row({static_cast<double>(b) / o.bins, static_cast<double>(b + 1) / o.bins,
            counts[static_cast<std::size_t>(b)] / static_cast<double>(ens.n_paths)});
  }

  const std::vector<std::pair<std::string, std::pair<TrigPoly, TrigPoly>>> pairs{
      {"cos1*cos1", {cosine(1), cosine(1)}}, {"cos1*cos2", {cosine(1), cosine(2)}}, {"cos2*cos1", {cosine(2), cosine(1)}}};
  // se from the exact second moment E[f1²(Z_n) f2²(Z_{n+1})]
  auto& ct = r.table("covariance", {"pair", "n", "estimate", "exact", "se", "sample_se", "sigmas"});
  const auto n_paths = static_cast<double>(ens.n_paths);
  for (std::size_t lag : {std::size_t{0}, o.steps / 2, o.steps - 1}) {
    for (const auto& [label, fs] : pairs) {
      const Estimate mc = solenoid_covariance_mc(ens, fs.first, fs.second, lag);
      const double m1 = solenoid_covariance_exact(w, fs.first, fs.second, lag, start);
      const double m2 = solenoid_covariance_exact(w, fs.first * fs.first, fs.second * fs.second, lag, start);
      const double se = std::sqrt(std::max(0.0, m2 - m1 * m1) / n_paths);
      const Check c = compare("covariance " + label + " n=" + std::to_string(lag), {mc.estimate, se}, m1);
      ct.row({label, static_cast<std::int64_t>(lag), c.estimate, c.exact, c.se, mc.se, c.sigmas});
      r.checks.push_back(c);
    }
  }
}

}  // namespace spectral_walks::cli
