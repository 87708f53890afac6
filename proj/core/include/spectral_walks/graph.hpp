#pragma once

// Finite weighted graphs with conductance, the graph Laplacian, the
// random-walk transfer operator, and the l2 / energy inner products.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spectral_walks/rational.hpp"
#include "spectral_walks/summation.hpp"

namespace spectral_walks {

/// Structural requirements every loaded graph must satisfy.
enum class GraphAxiom {
  kNonEmpty,
  kUniqueVertices,
  kKnownVertices,
  kOriginPresent,
  kEdgeSymmetry,
  kNoSelfLoops,
  kPositiveConductance,
  kConnected,
};

constexpr std::string_view axiom_name(GraphAxiom a) {
  switch (a) {
    case GraphAxiom::kNonEmpty: return "non-empty vertex set";
    case GraphAxiom::kUniqueVertices: return "unique vertex ids";
    case GraphAxiom::kKnownVertices: return "edges join known vertices";
    case GraphAxiom::kOriginPresent: return "origin is a vertex";
    case GraphAxiom::kEdgeSymmetry: return "edge symmetry c(x,y)=c(y,x)";
    case GraphAxiom::kNoSelfLoops: return "no self-loops";
    case GraphAxiom::kPositiveConductance: return "positive conductance";
    case GraphAxiom::kConnected: return "connectedness";
  }
  return "unknown";
}

class GraphError : public std::invalid_argument {
 public:
  GraphError(GraphAxiom axiom, const std::string& detail)
      : std::invalid_argument("graph violates axiom '" + std::string(axiom_name(axiom)) + "': " + detail),
        axiom_(axiom) {}
  GraphAxiom axiom() const { return axiom_; }

 private:
  GraphAxiom axiom_;
};

/// Raised when a vertex function does not live on the graph it is used with.
class VertexMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

template <class V, class S>
V lift(const S& s) {
  if constexpr (std::is_same_v<S, V>) {
    return s;
  } else if constexpr (std::is_same_v<S, Rational>) {
    return V(s.to_double());
  } else {
    return V(s);
  }
}

template <class V>
struct real_of {
  using type = V;
};
template <class T>
struct real_of<std::complex<T>> {
  using type = T;
};

template <class V>
auto abs2(const V& v) {
  if constexpr (std::is_same_v<V, std::complex<double>>) {
    return std::norm(v);
  } else {
    return v * v;
  }
}

template <class V>
auto real_part(const V& v) {
  if constexpr (std::is_same_v<V, std::complex<double>>) {
    return v.real();
  } else {
    return v;
  }
}

}  // namespace detail

template <class V>
using real_t = typename detail::real_of<V>::type;

/// A function on the vertex set, stored in vertex-index order.
template <class V>
class VertexFunction {
 public:
  VertexFunction() = default;
  explicit VertexFunction(std::size_t n, V fill = V{}) : values_(n, fill) {}
  explicit VertexFunction(std::vector<V> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  V& operator[](std::size_t i) { return values_[i]; }
  const V& operator[](std::size_t i) const { return values_[i]; }
  std::span<const V> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const VertexFunction&, const VertexFunction&) = default;

 private:
  std::vector<V> values_;
};

template <class S>
struct EdgeSpec {
  std::string u;
  std::string v;
  S c;
};

/// Finite, connected, loop-free graph with symmetric positive conductance and
/// a distinguished origin. Immutable once built; every constructor validates.
template <class S>
class BasicWeightedGraph {
 public:
  struct Neighbor {
    std::size_t vertex;
    S c;
  };
  /// Undirected edge, stored once with u < v.
  struct Edge {
    std::size_t u;
    std::size_t v;
    S c;
  };

  static BasicWeightedGraph build(std::vector<std::string> ids, const std::vector<EdgeSpec<S>>& edges,
                                  const std::string& origin) {
    if (ids.empty()) throw GraphError(GraphAxiom::kNonEmpty, "no vertices");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!index.emplace(ids[i], i).second) throw GraphError(GraphAxiom::kUniqueVertices, "duplicate id '" + ids[i] + "'");
    }
    auto lookup = [&](const std::string& id) {
      auto it = index.find(id);
      if (it == index.end()) throw GraphError(GraphAxiom::kKnownVertices, "unknown vertex '" + id + "'");
      return it->second;
    };
    auto oit = index.find(origin);
    if (oit == index.end()) throw GraphError(GraphAxiom::kOriginPresent, "origin '" + origin + "' not in vertex set");
    std::vector<Edge> indexed;
    indexed.reserve(edges.size());
    for (const auto& e : edges) indexed.push_back({lookup(e.u), lookup(e.v), e.c});
    return from_indexed(std::move(ids), std::move(indexed), oit->second);
  }

  /// Builds from index-based edges; each unordered pair may appear once, or
  /// repeatedly with an identical conductance.
  static BasicWeightedGraph from_indexed(std::vector<std::string> ids, std::vector<Edge> edges, std::size_t origin) {
    const std::size_t n = ids.size();
    if (n == 0) throw GraphError(GraphAxiom::kNonEmpty, "no vertices");
    if (origin >= n) throw GraphError(GraphAxiom::kOriginPresent, "origin index out of range");
    for (auto& e : edges) {
      if (e.u >= n || e.v >= n) throw GraphError(GraphAxiom::kKnownVertices, "edge endpoint out of range");
      if (e.u == e.v) throw GraphError(GraphAxiom::kNoSelfLoops, "self-loop at '" + ids[e.u] + "'");
      if (!(e.c > S{0})) {
        throw GraphError(GraphAxiom::kPositiveConductance,
                         "edge ('" + ids[e.u] + "','" + ids[e.v] + "') has non-positive conductance");
      }
      if constexpr (std::is_floating_point_v<S>) {
        if (!std::isfinite(e.c)) throw GraphError(GraphAxiom::kPositiveConductance, "non-finite conductance");
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    std::vector<Edge> unique;
    unique.reserve(edges.size());
    for (const auto& e : edges) {
      if (!unique.empty() && unique.back().u == e.u && unique.back().v == e.v) {
        if (!(unique.back().c == e.c)) {
          throw GraphError(GraphAxiom::kEdgeSymmetry,
                           "edge ('" + ids[e.u] + "','" + ids[e.v] + "') listed with different conductances");
        }
        continue;
      }
      unique.push_back(e);
    }

    BasicWeightedGraph g;
    g.ids_ = std::move(ids);
    g.origin_ = origin;
    g.edges_ = std::move(unique);
    g.offsets_.assign(n + 1, 0);
    for (const auto& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : g.edges_) {
      g.adjacency_[fill[e.u]++] = {e.v, e.c};
      g.adjacency_[fill[e.v]++] = {e.u, e.c};
    }
    g.total_.assign(n, S{0});
    for (std::size_t x = 0; x < n; ++x) {
      for (const auto& nb : g.neighbors(x)) g.total_[x] += nb.c;
    }
    g.check_connected();
    for (std::size_t i = 0; i < n; ++i) g.index_.emplace(g.ids_[i], i);
    return g;
  }

  std::size_t size() const { return ids_.size(); }
  std::size_t origin() const { return origin_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  std::span<const std::string> ids() const { return ids_; }
  std::optional<std::size_t> index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::span<const Neighbor> neighbors(std::size_t x) const {
    return std::span<const Neighbor>(adjacency_).subspan(offsets_[x], offsets_[x + 1] - offsets_[x]);
  }
  std::span<const Edge> edges() const { return edges_; }
  /// c(x) = sum of c(x,y) over neighbours y.
  const S& total_conductance(std::size_t x) const { return total_[x]; }

  /// Same graph with conductances converted to another scalar type.
  template <class T>
  BasicWeightedGraph<T> convert() const {
    std::vector<typename BasicWeightedGraph<T>::Edge> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.push_back({e.u, e.v, detail::lift<T>(e.c)});
    return BasicWeightedGraph<T>::from_indexed(ids_, std::move(out), origin_);
  }

 private:
  void check_connected() const {
    const std::size_t n = size();
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (const auto& nb : neighbors(x)) {
        if (!seen[nb.vertex]) {
          seen[nb.vertex] = 1;
          ++count;
          stack.push_back(nb.vertex);
        }
      }
    }
    if (count != n) {
      const auto missing = static_cast<std::size_t>(std::find(seen.begin(), seen.end(), 0) - seen.begin());
      throw GraphError(GraphAxiom::kConnected, "vertex '" + ids_[missing] + "' unreachable from '" + ids_[0] + "'");
    }
  }

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t origin_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<S> total_;
};

using WeightedGraph = BasicWeightedGraph<double>;
using ExactGraph = BasicWeightedGraph<Rational>;

namespace detail {

template <class S, class V>
void require_on(const BasicWeightedGraph<S>& g, const VertexFunction<V>& f) {
  if (f.size() != g.size()) {
    throw VertexMismatch("vertex function has " + std::to_string(f.size()) + " values, graph has " +
                         std::to_string(g.size()) + " vertices");
  }
}

template <class V>
void require_same(const VertexFunction<V>& a, const VertexFunction<V>& b) {
  if (a.size() != b.size()) throw VertexMismatch("vertex functions live on different vertex sets");
}

}  // namespace detail

template <class V, class S>
VertexFunction<V> delta(const BasicWeightedGraph<S>& g, std::size_t x) {
  VertexFunction<V> f(g.size());
  f[x] = V(1);
  return f;
}

template <class V, class S>
VertexFunction<V> constant(const BasicWeightedGraph<S>& g, V value) {
  return VertexFunction<V>(g.size(), value);
}

/// (Δf)(x) = Σ_{y~x} c(x,y) (f(x) - f(y)).
template <class S, class V>
VertexFunction<V> laplacian_apply(const BasicWeightedGraph<S>& g, const VertexFunction<V>& f) {
  detail::require_on(g, f);
  VertexFunction<V> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    CompensatedSum<V> acc;
    for (const auto& nb : g.neighbors(x)) acc.add(detail::lift<V>(nb.c) * (f[x] - f[nb.vertex]));
    out[x] = acc.value();
  }
  return out;
}

/// (Tf)(x) = Σ_{y~x} p(x,y) f(y) with p(x,y) = c(x,y)/c(x).
template <class S, class V>
VertexFunction<V> transfer_apply(const BasicWeightedGraph<S>& g, const VertexFunction<V>& f) {
  detail::require_on(g, f);
  VertexFunction<V> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    CompensatedSum<V> acc;
    for (const auto& nb : g.neighbors(x)) acc.add(detail::lift<V>(nb.c) * f[nb.vertex]);
    out[x] = acc.value() / detail::lift<V>(g.total_conductance(x));
  }
  return out;
}

/// <f1, f2> in l2, conjugate-linear in the first slot.
template <class V>
V l2_inner(const VertexFunction<V>& f1, const VertexFunction<V>& f2) {
  detail::require_same(f1, f2);
  CompensatedSum<V> acc;
  for (std::size_t i = 0; i < f1.size(); ++i) acc.add(conj_value(f1[i]) * f2[i]);
  return acc.value();
}

/// Energy form ½ΣΣ_{x~y} c(x,y) conj(f1(x)-f1(y)) (f2(x)-f2(y)); each
/// undirected edge contributes once.
template <class S, class V>
V energy_inner(const BasicWeightedGraph<S>& g, const VertexFunction<V>& f1, const VertexFunction<V>& f2) {
  detail::require_on(g, f1);
  detail::require_on(g, f2);
  CompensatedSum<V> acc;
  for (const auto& e : g.edges()) {
    acc.add(detail::lift<V>(e.c) * conj_value(f1[e.u] - f1[e.v]) * (f2[e.u] - f2[e.v]));
  }
  return acc.value();
}

/// <f, Δf>_{l2} via Σ c(x)|f(x)|² − ΣΣ_{x~y} c(x,y) conj(f(x)) f(y).
template <class S, class V>
real_t<V> quadratic_form_l2(const BasicWeightedGraph<S>& g, const VertexFunction<V>& f) {
  detail::require_on(g, f);
  CompensatedSum<V> acc;
  for (std::size_t x = 0; x < g.size(); ++x) {
    acc.add(detail::lift<V>(g.total_conductance(x)) * V(detail::abs2(f[x])));
    for (const auto& nb : g.neighbors(x)) acc.add(-(detail::lift<V>(nb.c) * conj_value(f[x]) * f[nb.vertex]));
  }
  return detail::real_part(acc.value());
}

/// <f, Δf>_E via Σ_{x≠o}|(Δf)(x)|² + |Σ_{x≠o}(Δf)(x)|².
template <class S, class V>
real_t<V> quadratic_form_energy(const BasicWeightedGraph<S>& g, const VertexFunction<V>& f) {
  const auto lap = laplacian_apply(g, f);
  CompensatedSum<real_t<V>> squares;
  CompensatedSum<V> total;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (x == g.origin()) continue;
    squares.add(detail::abs2(lap[x]));
    total.add(lap[x]);
  }
  squares.add(detail::abs2(total.value()));
  return squares.value();
}

/// <f>_c = Σ_x c(x) f(x).
template <class S, class V>
V conductance_sum(const BasicWeightedGraph<S>& g, const VertexFunction<V>& f) {
  detail::require_on(g, f);
  CompensatedSum<V> acc;
  for (std::size_t x = 0; x < g.size(); ++x) acc.add(detail::lift<V>(g.total_conductance(x)) * f[x]);
  return acc.value();
}

/// Pointwise product f1·f2.
template <class V>
VertexFunction<V> pointwise_product(const VertexFunction<V>& f1, const VertexFunction<V>& f2) {
  detail::require_same(f1, f2);
  VertexFunction<V> out(f1.size());
  for (std::size_t i = 0; i < f1.size(); ++i) out[i] = f1[i] * f2[i];
  return out;
}

}  // namespace spectral_walks
