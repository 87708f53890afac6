#include <algorithm>
#include <cmath>

#include "spectral_walks/cli/commands.hpp"
#include "spectral_walks/graph.hpp"

namespace spectral_walks::cli {

Check tolerance_check(std::string name, double value, double expected, double tolerance) {
  Check c;
  c.name = std::move(name);
  c.estimate = value;
  c.exact = expected;
  c.passed = std::abs(value - expected) <= tolerance;
  c.sigmas = c.passed ? 0.0 : std::numeric_limits<double>::infinity();
  return c;
}

Cell word_cell(const Word& w, const Context& ctx) {
  if (w.is_origin()) return std::string(ctx.format == Format::json ? "" : "-");
  return w.to_string();
}

Word parse_word(const std::string& text, unsigned arity) {
  try {
    return Word::parse(text, arity);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

namespace {

std::size_t depth_for(const std::optional<std::size_t>& depth, std::size_t needed) {
  const std::size_t d = depth.value_or(needed);
  if (d < needed) throw InputError("--depth must be at least the longest word length (" + std::to_string(needed) + ")");
  if (d > 16) throw InputError("--depth above 16 is not supported for exact tree truncations");
  return d;
}

}  // namespace

void tree_path(const TreeOptions& o, const Context& ctx, Report& r) {
  const Word x = parse_word(o.word);
  auto& t = r.table("path", {"step", "from", "to"});
  const TreePath path = path_edges(x);
  for (std::size_t i = 0; i < path.size(); ++i) {
    t.row({static_cast<std::int64_t>(i), word_cell(path.edges[i].first, ctx), word_cell(path.edges[i].second, ctx)});
  }
}

void tree_dipole(const TreeOptions& o, const Context& ctx, Report& r) {
  const Word x = parse_word(o.x);
  const Word y = parse_word(o.y);
  if (x.is_origin() || y.is_origin()) throw InputError("dipoles are indexed by non-origin words");
  const std::size_t depth = depth_for(o.depth, std::max(x.length(), y.length()));
  const ExactGraph g = exact_tree_graph(depth);
  const Rational energy =
      energy_inner(g, dipole_function<Rational>(x, depth), dipole_function<Rational>(y, depth));
  const std::int64_t kernel = dipole_value(x, y);
  r.table("dipole", {"x", "y", "depth", "kernel", "energy"})
      .row({word_cell(x, ctx), word_cell(y, ctx), static_cast<std::int64_t>(depth), kernel, energy.to_string()});
  r.checks.push_back(tolerance_check("kernel equals energy inner product", energy.to_double(),
                                     static_cast<double>(kernel), 0.0));
}

void tree_defect(const TreeOptions& o, const Context& ctx, Report& r) {
  const std::size_t depth = depth_for(o.depth, o.max_length + 1);
  const ExactGraph g = exact_tree_graph(depth);
  auto& t = r.table("defect", {"word", "length", "max_abs_defect", "energy_norm2"});
  std::int64_t bad_defect = 0;
  std::int64_t bad_norm = 0;
  for (const Word& x : words_up_to(o.max_length)) {
    const auto defect = dipole_defect(x, depth);
    Rational worst(0);
    for (const auto& v : defect) worst = std::max(worst, v < Rational(0) ? -v : v);
    const auto vx = dipole_function<Rational>(x, depth);
    const Rational norm2 = energy_inner(g, vx, vx);
    if (worst != Rational(0)) ++bad_defect;
    if (norm2 != Rational(static_cast<std::int64_t>(x.length()))) ++bad_norm;
    t.row({word_cell(x, ctx), static_cast<std::int64_t>(x.length()), worst.to_string(), norm2.to_string()});
  }
  r.checks.push_back(tolerance_check("words with nonzero dipole defect", static_cast<double>(bad_defect), 0.0, 0.0));
  r.checks.push_back(tolerance_check("words with energy norm != length", static_cast<double>(bad_norm), 0.0, 0.0));
}

void tree_encode(const TreeOptions& o, const Context& ctx, Report& r) {
  if (o.words.empty()) throw InputError("--words is required");
  if (!o.residues.empty()) {
    const auto arity = static_cast<unsigned>(o.residues.size());
    if (arity < 2 || arity > 10) throw InputError("--residues needs between 2 and 10 entries");
    auto& t = r.table("encode", {"word", "nadic"});
    for (const auto& text : o.words) {
      const Word w = parse_word(text, arity);
      try {
        t.row({word_cell(w, ctx), encode_nadic(w, o.residues)});
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
    }
    return;
  }
  auto& t = r.table("encode", {"word", "nat", "int"});
  for (const auto& text : o.words) {
    const Word w = parse_word(text);
    const Cell as_int = w.is_origin() ? Cell{std::string()} : Cell{encode_int(w)};
    t.row({word_cell(w, ctx), static_cast<std::int64_t>(encode_nat(w)), as_int});
  }
}

void tree_decode(const TreeOptions& o, const Context& ctx, Report& r) {
  if (o.ints.empty() && o.nats.empty()) throw InputError("give --ints or --nats");
  auto& t = r.table("decode", {"kind", "value", "word"});
  for (auto n : o.nats) t.row({std::string("nat"), static_cast<std::int64_t>(n), word_cell(decode_nat(n), ctx)});
  for (auto n : o.ints) t.row({std::string("int"), n, word_cell(decode_int(n), ctx)});
}

void tree_cantor(const TreeOptions& o, const Context&, Report& r) {
  try {
    const Rational v = cantor_encode(o.int_digits, o.frac_digits);
    r.table("cantor", {"exact", "value"}).row({v.to_string(), v.to_double()});
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

}  // namespace spectral_walks::cli
