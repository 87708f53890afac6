#include "spectral_walks/cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "spectral_walks/cli/commands.hpp"
#include "spectral_walks/markov.hpp"
#include "spectral_walks/parallel.hpp"
#include "spectral_walks/version.hpp"

namespace spectral_walks::cli {

unsigned worker_threads() {
  if (const char* env = std::getenv("SPECTRAL_WALKS_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<unsigned>(v);
  }
  return resolve_threads(0);
}

namespace {

struct Common {
  std::string out = "csv";
  std::string output;
  std::uint64_t seed = 0;
};

struct Leaf {
  CLI::App* app = nullptr;
  std::string path;
  std::function<void(const Context&, Report&)> action;
};

class Cli {
 public:
  Cli() {
    app_.name("spectral-walks");
    app_.description("Spectral theory of walks on weighted graphs, dyadic trees and the circle.");
    app_.set_version_flag("--version", std::string(kVersion));
    app_.require_subcommand(1);
    app_.option_defaults()->always_capture_default();
    build_tree();
    build_spectra();
    build_walk();
    build_wavelet();
    build_solenoid();
    build_verify();
  }

  int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app_.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app_.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
      return app_.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n\n" << deepest()->help();
      return kInvalidInput;
    }

    const Leaf* leaf = selected();
    if (leaf == nullptr) {
      err << deepest()->help();
      return kInvalidInput;
    }
    Context ctx;
    ctx.format = common_.out == "json" ? Format::json : Format::csv;
    ctx.seed = common_.seed;
    ctx.threads = worker_threads();

    Report report;
    report.command = leaf->path;
    report.seed = ctx.seed;
    report.config_hash = fnv1a(canonical_config(*leaf));
    try {
      leaf->action(ctx, report);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kInvalidInput;
    } catch (const std::out_of_range& e) {
      err << "error: " << e.what() << "\n";
      return kInvalidInput;
    } catch (const std::overflow_error& e) {
      err << "error: " << e.what() << "\n";
      return kInvalidInput;
    } catch (const ReducibleChainError& e) {
      err << "error: " << e.what() << "\n";
      return kInvalidInput;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kCheckFailed;
    }

    std::ostringstream buf;
    write_report(buf, report, ctx.format);
    if (common_.output.empty() || common_.output == "-") {
      out << buf.str();
    } else {
      std::ofstream file(common_.output, std::ios::binary);
      if (!(file << buf.str())) {
        err << "error: cannot write '" << common_.output << "'\n";
        return kInvalidInput;
      }
    }
    for (const auto& c : report.checks) {
      if (!c.passed) err << "check failed: " << c.name << "\n";
    }
    return report.all_passed() ? kOk : kCheckFailed;
  }

 private:
  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& desc,
                 std::function<void(const Context&, Report&)> action) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->add_option("--out", common_.out, "Report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", common_.output, "Write the report to this file instead of stdout");
    sub->add_option("--seed", common_.seed, "Random seed");
    const std::string path = (parent == &app_ ? "" : parent->get_name() + " ") + name;
    leaves_.push_back({sub, path, std::move(action)});
    return sub;
  }

  CLI::App* group(const std::string& name, const std::string& desc) {
    CLI::App* g = app_.add_subcommand(name, desc);
    g->require_subcommand(1);
    return g;
  }

  void build_tree() {
    CLI::App* g = group("tree", "Dyadic tree words, dipoles and encodings");
    auto* path = leaf(g, "path", "Edges of the geodesic from the origin to a word",
                      [this](const Context& c, Report& r) { tree_path(tree_, c, r); });
    path->add_option("--word", tree_.word, "Word, '-' for the origin")->required();
    auto* dip = leaf(g, "dipole", "Dipole kernel <v_x, v_y> by prefix count and by energy",
                     [this](const Context& c, Report& r) { tree_dipole(tree_, c, r); });
    dip->add_option("--x", tree_.x)->required();
    dip->add_option("--y", tree_.y)->required();
    dip->add_option("--depth", tree_.depth, "Truncation depth");
    auto* def = leaf(g, "defect", "Exact check of the dipole equation for all short words",
                     [this](const Context& c, Report& r) { tree_defect(tree_, c, r); });
    def->add_option("--max-length", tree_.max_length)->check(CLI::Range(1, 12));
    def->add_option("--depth", tree_.depth, "Truncation depth (default max-length + 1)");
    auto* enc = leaf(g, "encode", "Integer encodings of words",
                     [this](const Context& c, Report& r) { tree_encode(tree_, c, r); });
    enc->add_option("--words", tree_.words)->delimiter(',')->required();
    enc->add_option("--residues", tree_.residues, "Complete residue system for the n-adic encoding")->delimiter(',');
    auto* dec = leaf(g, "decode", "Shortest words for integers",
                     [this](const Context& c, Report& r) { tree_decode(tree_, c, r); });
    dec->add_option("--ints", tree_.ints, "Signed values; write --ints=-3,5 for negatives")->delimiter(',');
    dec->add_option("--nats", tree_.nats)->delimiter(',');
    auto* can = leaf(g, "cantor", "Exact value of a base-3 expansion with digits 0 and 2",
                     [this](const Context& c, Report& r) { tree_cantor(tree_, c, r); });
    can->add_option("--int", tree_.int_digits, "Integer digits, most significant first")->delimiter(',');
    can->add_option("--frac", tree_.frac_digits, "Fractional digits a1,a2,...")->delimiter(',');
  }

  void build_spectra() {
    CLI::App* g = group("spectra", "Gram matrices of dipoles and their spectra");
    auto* gram = leaf(g, "gram", "Gram matrix, eigenpairs and R values",
                      [this](const Context& c, Report& r) { spectra_gram(spectra_, c, r); });
    gram->add_option("--words", spectra_.words)->delimiter(',');
    gram->add_option("--matrix", spectra_.matrix, "Symmetric matrix, rows split by ';', e.g. 2,1;1,2");
    gram->add_option("--depth", spectra_.depth);
    auto* growth = leaf(g, "growth", "Sum of squared eigenvector means over nested families",
                        [this](const Context& c, Report& r) { spectra_growth(spectra_, c, r); });
    growth->add_option("--max-depth", spectra_.max_depth);
    auto* rec = leaf(g, "reciprocity", "Rayleigh quotients of the Laplacian versus inverse Gram quotients",
                     [this](const Context& c, Report& r) { spectra_reciprocity(spectra_, c, r); });
    rec->add_option("--words", spectra_.words)->delimiter(',')->required();
    rec->add_option("--depth", spectra_.depth);
  }

  void build_walk() {
    CLI::App* g = group("walk", "Random walks on weighted graphs");
    auto* sim = leaf(g, "sim", "Monte Carlo check of marginals, covariances and the Markov property",
                     [this](const Context& c, Report& r) { walk_sim(walk_, c, r); });
    sim->add_option("--graph", walk_.graph, "Graph JSON file");
    sim->add_option("--ruin", walk_.ruin, "Use the path 0..N instead of a graph file");
    sim->add_option("--steps", walk_.steps);
    sim->add_option("--paths", walk_.paths);
    sim->add_option("--min-visits", walk_.min_visits);
    auto* harm = leaf(g, "harmonic", "Harmonic extension of boundary values and its martingale check",
                      [this](const Context& c, Report& r) { walk_harmonic(walk_, c, r); });
    harm->add_option("--graph", walk_.graph, "Graph JSON file");
    harm->add_option("--ruin", walk_.ruin, "Gambler's ruin on 0..N with h(0)=0, h(N)=1");
    harm->add_option("--boundary", walk_.boundary, "id=value pairs")->delimiter(',');
    harm->add_option("--steps", walk_.steps);
    harm->add_option("--paths", walk_.paths);
    harm->add_option("--min-visits", walk_.min_visits);
  }

  void add_filter_options(CLI::App* sub) {
    sub->add_option("--coeffs", wavelet_.coeffs, "Real filter taps a_0,a_1,...")->delimiter(',');
    sub->add_option("--filter", wavelet_.filter, "Filter JSON file");
    sub->add_option("--degree", wavelet_.degree);
    sub->add_option("--first", wavelet_.first, "Index of the first tap");
  }

  void build_wavelet() {
    CLI::App* g = group("wavelet", "Wavelet filters and their transfer operators");
    auto* qmf = leaf(g, "qmf", "Quadrature-mirror residuals",
                     [this](const Context& c, Report& r) { wavelet_qmf(wavelet_, c, r); });
    add_filter_options(qmf);
    auto* tight = leaf(g, "tightness", "Periodization of the cascade approximation",
                       [this](const Context& c, Report& r) { wavelet_tightness(wavelet_, c, r); });
    add_filter_options(tight);
    tight->add_option("--t", wavelet_.t)->delimiter(',');
    tight->add_option("--K", wavelet_.k_max, "Periodization cutoff");
    tight->add_option("--depth", wavelet_.depth, "Cascade depth");
    tight->add_option("--frame", wavelet_.frame, "Quadrature points for the Parseval-frame test (0 = off)");
    auto* cantor = leaf(g, "cantor", "The Cantor filter for scaling degree 3",
                        [this](const Context& c, Report& r) { wavelet_cantor(wavelet_, c, r); });
    cantor->add_flag("--check", wavelet_.check, "Assert the exact identities");
  }

  void build_solenoid() {
    CLI::App* g = group("solenoid", "Random walks on backward orbits of t -> 2t");
    auto* walk = leaf(g, "walk", "Simulate the walk and compare covariances",
                      [this](const Context& c, Report& r) { solenoid_walk_cmd(solenoid_, c, r); });
    walk->add_option("--w", solenoid_.w, "haar, half, or a filter JSON file");
    walk->add_option("--steps", solenoid_.steps);
    walk->add_option("--paths", solenoid_.paths);
    walk->add_option("--start-level", solenoid_.start_level, "Uniform start on the 2^L grid")->check(CLI::Range(0, 20));
    walk->add_option("--start", solenoid_.start, "Fixed start num/2^m, e.g. 3/8");
    walk->add_option("--bins", solenoid_.bins, "Histogram bins for the final position");
  }

  void build_verify() {
    CLI::App* g = group("verify", "Exact invariant suite");
    auto* all = leaf(g, "all", "Run every exact check",
                     [this](const Context& c, Report& r) { verify_all(quick_, c, r); });
    all->add_flag("--quick", quick_, "Smaller sizes");
  }

  const Leaf* selected() const {
    for (const auto& l : leaves_) {
      if (l.app->parsed()) return &l;
    }
    return nullptr;
  }

  CLI::App* deepest() {
    CLI::App* cur = &app_;
    for (;;) {
      auto subs = cur->get_subcommands();
      if (subs.empty()) return cur;
      cur = subs.front();
    }
  }

  /// Command path plus every option except the output path, in declaration order.
  static std::string canonical_config(const Leaf& l) {
    std::string s = l.path;
    for (const CLI::Option* opt : l.app->get_options()) {
      if (opt->check_lname("help") || opt->check_lname("output")) continue;
      s += '\n';
      s += opt->get_name();
      s += '=';
      if (opt->count() > 0) {
        for (const auto& v : opt->results()) s += v + ',';
      } else {
        s += opt->get_default_str();
      }
    }
    return s;
  }

  CLI::App app_;
  Common common_;
  std::vector<Leaf> leaves_;
  TreeOptions tree_;
  SpectraOptions spectra_;
  WalkOptions walk_;
  WaveletOptions wavelet_;
  SolenoidOptions solenoid_;
  bool quick_ = false;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return Cli().run(argc, argv, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"spectral-walks"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace spectral_walks::cli
