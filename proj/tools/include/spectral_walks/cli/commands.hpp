#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectral_walks/cli/report.hpp"
#include "spectral_walks/tree.hpp"

namespace spectral_walks::cli {

/// Bad user input; maps to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Context {
  Format format = Format::csv;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Deterministic check with an absolute tolerance; se is reported as 0.
Check tolerance_check(std::string name, double value, double expected, double tolerance);

/// "-" on CSV, "" in JSON.
Cell word_cell(const Word& w, const Context& ctx);
Word parse_word(const std::string& text, unsigned arity = 2);

struct TreeOptions {
  std::string word;
  std::string x;
  std::string y;
  std::optional<std::size_t> depth;
  std::size_t max_length = 6;
  std::vector<std::string> words;
  std::vector<std::int64_t> residues;
  std::vector<std::int64_t> ints;
  std::vector<std::uint64_t> nats;
  std::vector<int> int_digits;
  std::vector<int> frac_digits;
};

void tree_path(const TreeOptions& o, const Context& ctx, Report& r);
void tree_dipole(const TreeOptions& o, const Context& ctx, Report& r);
void tree_defect(const TreeOptions& o, const Context& ctx, Report& r);
void tree_encode(const TreeOptions& o, const Context& ctx, Report& r);
void tree_decode(const TreeOptions& o, const Context& ctx, Report& r);
void tree_cantor(const TreeOptions& o, const Context& ctx, Report& r);

struct SpectraOptions {
  std::vector<std::string> words;
  std::string matrix;
  std::optional<std::size_t> depth;
  std::size_t max_depth = 5;
};

void spectra_gram(const SpectraOptions& o, const Context& ctx, Report& r);
void spectra_growth(const SpectraOptions& o, const Context& ctx, Report& r);
void spectra_reciprocity(const SpectraOptions& o, const Context& ctx, Report& r);

struct WalkOptions {
  std::string graph;
  std::size_t ruin = 0;
  std::vector<std::string> boundary;
  std::size_t steps = 64;
  std::size_t paths = 100000;
  std::size_t min_visits = 100;
};

void walk_sim(const WalkOptions& o, const Context& ctx, Report& r);
void walk_harmonic(const WalkOptions& o, const Context& ctx, Report& r);

struct WaveletOptions {
  std::vector<double> coeffs;
  std::string filter;
  int degree = 2;
  int first = 0;
  std::vector<double> t{0.3};
  int k_max = 512;
  int depth = 20;
  int frame = 0;
  bool check = false;
};

void wavelet_qmf(const WaveletOptions& o, const Context& ctx, Report& r);
void wavelet_tightness(const WaveletOptions& o, const Context& ctx, Report& r);
void wavelet_cantor(const WaveletOptions& o, const Context& ctx, Report& r);

struct SolenoidOptions {
  std::string w = "haar";
  std::size_t steps = 40;
  std::size_t paths = 100000;
  unsigned start_level = 8;
  std::string start;
  int bins = 16;
};

void solenoid_walk_cmd(const SolenoidOptions& o, const Context& ctx, Report& r);

void verify_all(bool quick, const Context& ctx, Report& r);

}  // namespace spectral_walks::cli
