#include <algorithm>
#include <cmath>
#include <sstream>

#include "spectral_walks/cli/commands.hpp"
#include "spectral_walks/gram.hpp"

namespace spectral_walks::cli {

namespace {

std::vector<Word> parse_family(const std::vector<std::string>& words) {
  std::vector<Word> family;
  family.reserve(words.size());
  for (const auto& w : words) family.push_back(parse_word(w));
  try {
    validate_family(family);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return family;
}

/// Rows separated by ';', entries by ','.
Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<double> entries;
    std::stringstream es(row);
    std::string item;
    while (std::getline(es, item, ',')) {
      try {
        std::size_t used = 0;
        entries.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw InputError("bad matrix entry '" + item + "'");
      }
    }
    rows.push_back(std::move(entries));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw InputError("empty matrix");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) throw InputError("matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

std::size_t family_depth(const std::vector<Word>& family, const std::optional<std::size_t>& depth) {
  std::size_t longest = 0;
  for (const auto& w : family) longest = std::max(longest, w.length());
  const std::size_t d = depth.value_or(longest);
  if (d < longest) throw InputError("--depth must be at least the longest word length");
  if (d > 16) throw InputError("--depth above 16 is not supported");
  return d;
}

}  // namespace

void spectra_gram(const SpectraOptions& o, const Context& ctx, Report& r) {
  if (o.words.empty() == o.matrix.empty()) throw InputError("give exactly one of --words or --matrix");
  GramSpectrum gs;
  try {
    gs = o.matrix.empty() ? GramSpectrum::from_words(parse_family(o.words))
                          : GramSpectrum::from_matrix(parse_matrix(o.matrix));
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const std::size_t n = gs.size();

  std::vector<std::string> mcols{"i", "j"};
  if (gs.has_words()) mcols.insert(mcols.end(), {"word_i", "word_j"});
  mcols.push_back("M");
  auto& mt = r.table("matrix", mcols);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Cell> row{static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)};
      if (gs.has_words()) {
        row.push_back(word_cell(gs.words[i], ctx));
        row.push_back(word_cell(gs.words[j], ctx));
      }
      row.push_back(gs.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      mt.row(std::move(row));
    }
  }

  std::vector<std::string> scols{"j", "lambda", "mean", "R"};
  for (std::size_t k = 0; k < n; ++k) scols.push_back("xi_" + std::to_string(k));
  auto& st = r.table("spectrum", scols);
  const auto rv = r_function(gs);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Cell> row{static_cast<std::int64_t>(j), rv[j].lambda, rv[j].mean, rv[j].r};
    for (std::size_t k = 0; k < n; ++k) {
      row.push_back(gs.eigenvectors(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)));
    }
    st.row(std::move(row));
  }

  if (gs.has_words()) {
    const std::size_t depth = family_depth(gs.words, o.depth);
    const Eigen::MatrixXd energy = energy_gram_matrix(gs.words, depth);
    r.checks.push_back(tolerance_check("energy route equals prefix count", (energy - gs.matrix).cwiseAbs().maxCoeff(),
                                       0.0, 1e-9));
  }
}

void spectra_growth(const SpectraOptions& o, const Context&, Report& r) {
  if (o.max_depth < 1 || o.max_depth > 10) throw InputError("--max-depth must be in [1, 10]");
  auto& t = r.table("growth", {"depth", "size", "sum_mean_sq", "ratio"});
  for (std::size_t d = 1; d <= o.max_depth; ++d) {
    const auto family = words_up_to(d);
    const double s = spectral_growth(family);
    const auto size = static_cast<double>(family.size());
    t.row({static_cast<std::int64_t>(d), static_cast<std::int64_t>(family.size()), s, s / size});
    r.checks.push_back(tolerance_check("growth depth " + std::to_string(d), s, size, 1e-8));
  }
}

void spectra_reciprocity(const SpectraOptions& o, const Context&, Report& r) {
  if (o.words.empty()) throw InputError("--words is required");
  const auto family = parse_family(o.words);
  const std::size_t depth = family_depth(family, o.depth);
  auto& t = r.table("reciprocity", {"lambda", "energy_route", "matrix_route", "residual"});
  double worst = 0.0;
  for (const auto& p : reciprocity_spectrum(family, depth)) {
    const double res = std::abs(p.energy_route - p.matrix_route);
    worst = std::max(worst, res);
    t.row({p.lambda, p.energy_route, p.matrix_route, res});
  }
  r.checks.push_back(tolerance_check("max reciprocity residual", worst, 0.0, 1e-9));
}

}  // namespace spectral_walks::cli
