#include <cmath>
#include <map>

#include "spectral_walks/cli/commands.hpp"
#include "spectral_walks/graph_io.hpp"
#include "spectral_walks/markov.hpp"

namespace spectral_walks::cli {

namespace {

WeightedGraph load_graph(const WalkOptions& o) {
  if (!o.graph.empty() && o.ruin > 0) throw InputError("give either --graph or --ruin, not both");
  if (o.ruin > 0) {
    if (o.ruin < 2 || o.ruin > 100000) throw InputError("--ruin must be in [2, 100000]");
    std::vector<std::string> ids;
    std::vector<EdgeSpec<double>> edges;
    for (std::size_t k = 0; k <= o.ruin; ++k) ids.push_back(std::to_string(k));
    for (std::size_t k = 0; k < o.ruin; ++k) edges.push_back({ids[k], ids[k + 1], 1.0});
    return WeightedGraph::build(ids, edges, ids.front());
  }
  if (o.graph.empty()) throw InputError("--graph is required");
  try {
    return load_graph_json(o.graph);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

void check_sizes(const WalkOptions& o) {
  if (o.steps < 2 || o.steps > 100000) throw InputError("--steps must be in [2, 100000]");
  if (o.paths < 2 || o.paths > 100000000) throw InputError("--paths must be in [2, 1e8]");
  if (o.paths * (o.steps + 1) > (std::size_t{1} << 31)) throw InputError("--paths x --steps too large");
}

Check conditional_check(std::string name, const ConditionalReport& rep) {
  Check c;
  c.name = std::move(name);
  c.estimate = rep.max_sigmas;
  c.exact = 0.0;
  c.se = 1.0;
  c.sigmas = rep.max_sigmas;
  c.passed = rep.passed;
  return c;
}

void bin_table(Report& r, const std::string& name, const WeightedGraph& g, const ConditionalReport& rep) {
  auto& t = r.table(name, {"state", "visits", "empirical", "exact", "se", "sigmas", "excluded"});
  for (const auto& b : rep.bins) {
    t.row({g.id(b.state), static_cast<std::int64_t>(b.visits), b.empirical, b.exact, b.se, b.sigmas, b.flagged});
  }
}

}  // namespace

void walk_sim(const WalkOptions& o, const Context& ctx, Report& r) {
  const WeightedGraph g = load_graph(o);
  check_sizes(o);
  const FiniteMarkov fm = FiniteMarkov::from_graph(g);
  const PathEnsemble ens = simulate(fm, o.steps, o.paths, ctx.seed, ctx.threads);
  const auto n = static_cast<Eigen::Index>(g.size());

  Eigen::VectorXd law = fm.mu0();
  for (std::size_t k = 0; k < o.steps; ++k) law = fm.p().transpose() * law;
  std::vector<double> counts(g.size(), 0.0);
  for (std::size_t p = 0; p < ens.n_paths; ++p) counts[ens.at(p, o.steps)] += 1.0;
  auto& mt = r.table("marginals", {"vertex", "empirical", "exact", "se"});
  const auto paths = static_cast<double>(ens.n_paths);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double freq = counts[static_cast<std::size_t>(x)] / paths;
    const double se = std::sqrt(freq * (1.0 - freq) / (paths - 1.0));
    mt.row({g.id(static_cast<std::size_t>(x)), freq, law(x), se});
    r.checks.push_back(compare("marginal " + g.id(static_cast<std::size_t>(x)) + " at step " + std::to_string(o.steps),
                               {freq, se}, law(x)));
  }

  const Eigen::VectorXd delta_o = Eigen::VectorXd::Unit(n, static_cast<Eigen::Index>(g.origin()));
  const Eigen::VectorXd index = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) / static_cast<double>(n);
  const std::vector<std::pair<std::string, std::pair<Eigen::VectorXd, Eigen::VectorXd>>> pairs{
      {"origin*index", {delta_o, index}}, {"index*origin", {index, delta_o}}, {"index*index", {index, index}}};
  auto& ct = r.table("covariance", {"pair", "n", "estimate", "exact", "se", "sigmas"});
  for (std::size_t lag : {std::size_t{0}, o.steps / 2, o.steps - 1}) {
    for (const auto& [label, fs] : pairs) {
      const Check c = compare("covariance " + label + " n=" + std::to_string(lag), covariance_mc(ens, fs.first, fs.second, lag),
                              covariance_exact(fm, fs.first, fs.second, lag));
      ct.row({label, static_cast<std::int64_t>(lag), c.estimate, c.exact, c.se, c.sigmas});
      r.checks.push_back(c);
    }
  }

  const std::size_t mid = o.steps / 2;
  const auto rep = markov_check(ens, fm, delta_o, mid, o.min_visits);
  bin_table(r, "markov", g, rep);
  r.checks.push_back(conditional_check("markov property n=" + std::to_string(mid), rep));
}

void walk_harmonic(const WalkOptions& o, const Context& ctx, Report& r) {
  const WeightedGraph g = load_graph(o);
  check_sizes(o);
  std::map<std::size_t, double> boundary;
  std::vector<std::string> entries = o.boundary;
  if (entries.empty() && o.ruin > 0) entries = {"0=0", std::to_string(o.ruin) + "=1"};
  if (entries.empty()) throw InputError("--boundary is required, e.g. --boundary a=0,b=1");
  for (const auto& item : entries) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("boundary entries look like id=value, got '" + item + "'");
    const std::string id = item.substr(0, eq);
    const auto idx = g.index_of(id);
    if (!idx) throw InputError("unknown boundary vertex '" + id + "'");
    try {
      boundary[*idx] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("bad boundary value in '" + item + "'");
    }
  }

  const FiniteMarkov fm = FiniteMarkov::from_graph(g);
  Eigen::VectorXd h;
  try {
    h = harmonic_solve(fm, boundary);
  } catch (const SingularSystemError& e) {
    throw InputError(e.what());
  }
  auto& ht = r.table("harmonic", {"vertex", "h", "boundary"});
  for (std::size_t x = 0; x < g.size(); ++x) ht.row({g.id(x), h(static_cast<Eigen::Index>(x)), boundary.contains(x)});

  std::vector<std::size_t> absorbing;
  for (const auto& [x, v] : boundary) absorbing.push_back(x);
  const auto n = static_cast<Eigen::Index>(g.size());
  const FiniteMarkov walk = fm.with_absorbing(absorbing).with_initial(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
  const PathEnsemble ens = simulate(walk, o.steps, o.paths, ctx.seed, ctx.threads);
  const auto rep = martingale_check(ens, h, o.min_visits);
  bin_table(r, "martingale", g, rep);
  r.checks.push_back(conditional_check("martingale h(Z_n)", rep));
}

}  // namespace spectral_walks::cli
