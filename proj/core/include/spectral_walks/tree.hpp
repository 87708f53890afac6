#pragma once

// Words over a finite alphabet as vertices of the N-ary tree, root paths,
// the path-intersection dipole kernel, and the integer encodings of words.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spectral_walks/graph.hpp"
#include "spectral_walks/rational.hpp"

namespace spectral_walks {

/// A finite word x = (x_0 x_1 … x_{n-1}) over {0, …, arity-1}. The empty
/// word is the tree root (the origin o).
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::uint8_t> digits, unsigned arity = 2);

  /// "" and "-" denote the origin; otherwise one character per digit.
  static Word parse(std::string_view text, unsigned arity = 2);
  static Word origin(unsigned arity = 2) { return Word({}, arity); }

  unsigned arity() const { return arity_; }
  std::size_t length() const { return digits_.size(); }
  bool is_origin() const { return digits_.empty(); }
  std::span<const std::uint8_t> digits() const { return digits_; }
  std::uint8_t operator[](std::size_t k) const { return digits_[k]; }

  Word parent() const;
  Word child(std::uint8_t digit) const;
  /// Shift map: (x_0 x_1 …) -> (d x_0 x_1 …).
  Word prepend(std::uint8_t digit) const;
  Word prefix(std::size_t n) const;

  /// Digit string; the origin renders as "".
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  std::vector<std::uint8_t> digits_;
  unsigned arity_ = 2;
};

std::size_t common_prefix_length(const Word& a, const Word& b);

/// Root-to-x edge list γ(x), as (parent, child) pairs.
struct TreePath {
  std::vector<std::pair<Word, Word>> edges;
  std::size_t size() const { return edges.size(); }
};

TreePath path_edges(const Word& x);

/// v_x(y) = #(γ(x) ∩ γ(y)). Throws std::invalid_argument for x = o.
std::int64_t dipole_value(const Word& x, const Word& y);

/// All words of length 1..max_length in tree order (by length, then
/// lexicographically); with include_origin the root comes first.
std::vector<Word> words_up_to(std::size_t max_length, unsigned arity = 2, bool include_origin = false);

/// Position of a word in tree order (root = 0).
std::size_t tree_index(const Word& w);
Word word_at(std::size_t index, unsigned arity = 2);
std::size_t tree_size(std::size_t depth, unsigned arity = 2);

/// The unit-conductance tree truncated at the given depth; vertex ids are
/// the word strings and the root is the origin. Leaves keep only the edge
/// to their parent.
ExactGraph exact_tree_graph(std::size_t depth, unsigned arity = 2);
WeightedGraph tree_graph(std::size_t depth, unsigned arity = 2);

/// v_x as a vertex function on the depth-truncated tree.
template <class V>
VertexFunction<V> dipole_function(const Word& x, std::size_t depth) {
  const std::size_t n = tree_size(depth, x.arity());
  VertexFunction<V> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = V(dipole_value(x, word_at(i, x.arity())));
  return f;
}

/// Δv_x − (δ_x − δ_o) on the depth-truncated unit tree, in exact arithmetic.
VertexFunction<Rational> dipole_defect(const Word& x, std::size_t depth);

/// τ⁰(w) = Σ_k x_k 2^k.
std::uint64_t encode_nat(const Word& w);
/// Shortest word with the given value (no trailing zero digit; 0 -> o).
Word decode_nat(std::uint64_t n);

/// −2^p + Σ_{k=0}^{p} x_k 2^k with p = l(w) − 1; rejects w = o.
std::int64_t encode_int(const Word& w);
/// Shortest word for n: minimal p with −2^p ≤ n ≤ 2^p − 1, digits of n + 2^p.
Word decode_int(std::int64_t n);

/// σ⁰(n) = 2n, σ¹(n) = 2n + 1.
std::uint64_t sigma(std::uint64_t n, unsigned bit);

/// Σ_k r(x_k) N^k, where r maps digit j to residues[j] and the residues form
/// a complete system modulo N = w.arity().
std::int64_t encode_nadic(const Word& w, std::span<const std::int64_t> residues);

/// Two-sided base-3 expansion a_{-k}3^k + … + a_0 + Σ_{i≥1} a_i 3^{-i}.
/// Integer digits are given most-significant first; all digits in {0, 2}.
Rational cantor_encode(std::span<const int> int_digits, std::span<const int> frac_digits);

}  // namespace spectral_walks
