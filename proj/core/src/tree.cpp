#include "spectral_walks/tree.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace spectral_walks {

namespace {

void check_arity(unsigned arity) {
  if (arity < 2 || arity > 10) throw std::invalid_argument("word arity must lie in [2, 10]");
}

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / base) throw std::overflow_error("tree size overflow");
    r *= base;
  }
  return r;
}

}  // namespace

Word::Word(std::vector<std::uint8_t> digits, unsigned arity) : digits_(std::move(digits)), arity_(arity) {
  check_arity(arity);
  for (auto d : digits_) {
    if (d >= arity) throw std::invalid_argument("digit " + std::to_string(d) + " outside alphabet");
  }
}

Word Word::parse(std::string_view text, unsigned arity) {
  check_arity(arity);
  if (text == "-") return origin(arity);
  std::vector<std::uint8_t> digits;
  digits.reserve(text.size());
  for (char ch : text) {
    if (ch < '0' || ch > '9' || static_cast<unsigned>(ch - '0') >= arity) {
      throw std::invalid_argument("invalid digit '" + std::string(1, ch) + "' in word '" + std::string(text) + "'");
    }
    digits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Word(std::move(digits), arity);
}

Word Word::parent() const {
  if (is_origin()) throw std::invalid_argument("the origin has no parent");
  return prefix(length() - 1);
}

Word Word::child(std::uint8_t digit) const {
  auto d = digits_;
  d.push_back(digit);
  return Word(std::move(d), arity_);
}

Word Word::prepend(std::uint8_t digit) const {
  std::vector<std::uint8_t> d;
  d.reserve(length() + 1);
  d.push_back(digit);
  d.insert(d.end(), digits_.begin(), digits_.end());
  return Word(std::move(d), arity_);
}

Word Word::prefix(std::size_t n) const {
  n = std::min(n, length());
  return Word(std::vector<std::uint8_t>(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(n)), arity_);
}

std::string Word::to_string() const {
  std::string s;
  s.reserve(length());
  for (auto d : digits_) s.push_back(static_cast<char>('0' + d));
  return s;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
  if (auto c = a.length() <=> b.length(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.digits_.begin(), a.digits_.end(), b.digits_.begin(),
                                                b.digits_.end());
}

std::size_t common_prefix_length(const Word& a, const Word& b) {
  const auto da = a.digits();
  const auto db = b.digits();
  const auto mism = std::mismatch(da.begin(), da.end(), db.begin(), db.end());
  return static_cast<std::size_t>(mism.first - da.begin());
}

TreePath path_edges(const Word& x) {
  TreePath p;
  p.edges.reserve(x.length());
  for (std::size_t k = 1; k <= x.length(); ++k) p.edges.emplace_back(x.prefix(k - 1), x.prefix(k));
  return p;
}

std::int64_t dipole_value(const Word& x, const Word& y) {
  if (x.is_origin()) throw std::invalid_argument("dipoles are indexed by non-origin vertices");
  if (x.arity() != y.arity()) throw std::invalid_argument("words over different alphabets");
  return static_cast<std::int64_t>(common_prefix_length(x, y));
}

std::size_t tree_size(std::size_t depth, unsigned arity) {
  check_arity(arity);
  return (checked_pow(arity, depth + 1) - 1) / (arity - 1);
}

std::size_t tree_index(const Word& w) {
  const std::size_t offset = w.length() == 0 ? 0 : tree_size(w.length() - 1, w.arity());
  std::size_t pos = 0;
  for (auto d : w.digits()) pos = pos * w.arity() + d;
  return offset + pos;
}

Word word_at(std::size_t index, unsigned arity) {
  check_arity(arity);
  std::size_t len = 0;
  std::size_t level = 1;  // number of words of length len
  while (index >= level) {
    index -= level;
    level *= arity;
    ++len;
  }
  std::vector<std::uint8_t> digits(len);
  for (std::size_t k = len; k-- > 0;) {
    digits[k] = static_cast<std::uint8_t>(index % arity);
    index /= arity;
  }
  return Word(std::move(digits), arity);
}

std::vector<Word> words_up_to(std::size_t max_length, unsigned arity, bool include_origin) {
  const std::size_t n = tree_size(max_length, arity);
  std::vector<Word> out;
  out.reserve(n);
  for (std::size_t i = include_origin ? 0 : 1; i < n; ++i) out.push_back(word_at(i, arity));
  return out;
}

ExactGraph exact_tree_graph(std::size_t depth, unsigned arity) {
  const std::size_t n = tree_size(depth, arity);
  std::vector<std::string> ids;
  ids.reserve(n);
  std::vector<ExactGraph::Edge> edges;
  edges.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Word w = word_at(i, arity);
    ids.push_back(w.to_string());
    if (!w.is_origin()) edges.push_back({tree_index(w.parent()), i, Rational(1)});
  }
  return ExactGraph::from_indexed(std::move(ids), std::move(edges), 0);
}

WeightedGraph tree_graph(std::size_t depth, unsigned arity) { return exact_tree_graph(depth, arity).convert<double>(); }

VertexFunction<Rational> dipole_defect(const Word& x, std::size_t depth) {
  if (x.length() > depth) throw std::invalid_argument("truncation depth below word length");
  const ExactGraph g = exact_tree_graph(depth, x.arity());
  VertexFunction<Rational> defect = laplacian_apply(g, dipole_function<Rational>(x, depth));
  defect[tree_index(x)] -= Rational(1);
  defect[g.origin()] += Rational(1);
  return defect;
}

std::uint64_t encode_nat(const Word& w) {
  if (w.arity() != 2) throw std::invalid_argument("encode_nat expects a binary word");
  std::uint64_t n = 0;
  for (std::size_t k = w.length(); k-- > 0;) {
    if (n > (std::numeric_limits<std::uint64_t>::max() - w[k]) / 2) throw std::overflow_error("encode_nat overflow");
    n = 2 * n + w[k];
  }
  return n;
}

Word decode_nat(std::uint64_t n) {
  std::vector<std::uint8_t> digits;
  while (n != 0) {
    digits.push_back(static_cast<std::uint8_t>(n & 1U));
    n >>= 1U;
  }
  return Word(std::move(digits), 2);
}

std::int64_t encode_int(const Word& w) {
  if (w.is_origin()) throw std::invalid_argument("encode_int is undefined on the origin");
  if (w.length() > 63) throw std::overflow_error("encode_int overflow");
  const std::size_t p = w.length() - 1;
  const auto value = static_cast<__int128>(encode_nat(w)) - (static_cast<__int128>(1) << p);
  return static_cast<std::int64_t>(value);
}

Word decode_int(std::int64_t n) {
  std::size_t p = 0;
  const auto wide = static_cast<__int128>(n);
  while (!(-(static_cast<__int128>(1) << p) <= wide && wide <= (static_cast<__int128>(1) << p) - 1)) ++p;
  auto shifted = static_cast<unsigned __int128>(wide + (static_cast<__int128>(1) << p));
  std::vector<std::uint8_t> digits(p + 1);
  for (std::size_t k = 0; k <= p; ++k) {
    digits[k] = static_cast<std::uint8_t>(shifted & 1U);
    shifted >>= 1U;
  }
  return Word(std::move(digits), 2);
}

std::uint64_t sigma(std::uint64_t n, unsigned bit) {
  if (bit > 1) throw std::invalid_argument("sigma branch must be 0 or 1");
  return 2 * n + bit;
}

std::int64_t encode_nadic(const Word& w, std::span<const std::int64_t> residues) {
  const auto n = static_cast<std::int64_t>(w.arity());
  if (residues.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("need exactly one residue per digit");
  }
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (auto r : residues) {
    auto cls = static_cast<std::size_t>(((r % n) + n) % n);
    if (hit[cls]) throw std::invalid_argument("residues are not a complete system modulo " + std::to_string(n));
    hit[cls] = 1;
  }
  __int128 value = 0;
  for (std::size_t k = w.length(); k-- > 0;) {
    value = value * n + residues[w[k]];
    if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min()) {
      throw std::overflow_error("encode_nadic overflow");
    }
  }
  return static_cast<std::int64_t>(value);
}

Rational cantor_encode(std::span<const int> int_digits, std::span<const int> frac_digits) {
  auto check = [](int d) {
    if (d != 0 && d != 2) throw std::invalid_argument("Cantor digits must be 0 or 2, got " + std::to_string(d));
  };
  Rational value(0);
  for (int d : int_digits) {
    check(d);
    value = value * Rational(3) + Rational(d);
  }
  Rational scale(1, 3);
  for (int d : frac_digits) {
    check(d);
    value += Rational(d) * scale;
    scale = scale / Rational(3);
  }
  return value;
}

}  // namespace spectral_walks
