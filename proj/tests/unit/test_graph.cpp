#include <complex>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "spectral_walks/graph.hpp"
#include "spectral_walks/graph_io.hpp"

using namespace spectral_walks;

namespace {

// a-b (1), b-c (2), c-d (1), d-a (3); origin a
template <class S>
BasicWeightedGraph<S> weighted_cycle() {
  return BasicWeightedGraph<S>::build({"a", "b", "c", "d"},
                                      {{"a", "b", S(1)}, {"b", "c", S(2)}, {"c", "d", S(1)}, {"d", "a", S(3)}}, "a");
}

WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> c(0.1, 5.0);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  std::vector<EdgeSpec<double>> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({ids[rng() % i], ids[i], c(rng)});
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t u = rng() % n;
    const std::size_t v = rng() % n;
    if (u != v) edges.push_back({ids[u], ids[v], c(rng)});
  }
  // drop repeated pairs so conductances stay single-valued
  std::vector<EdgeSpec<double>> unique;
  for (const auto& e : edges) {
    bool seen = false;
    for (const auto& f : unique) seen = seen || (f.u == e.u && f.v == e.v) || (f.u == e.v && f.v == e.u);
    if (!seen) unique.push_back(e);
  }
  return WeightedGraph::build(ids, unique, ids[0]);
}

VertexFunction<std::complex<double>> random_complex(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> z;
  VertexFunction<std::complex<double>> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = {z(rng), z(rng)};
  return f;
}

GraphAxiom axiom_of(const std::string& json) {
  try {
    parse_graph_json(json);
  } catch (const GraphError& e) {
    return e.axiom();
  }
  FAIL("expected a GraphError");
  return GraphAxiom::kNonEmpty;
}

}  // namespace

TEST_SUITE("graph_core") {
  TEST_CASE("laplacian and transfer on the weighted four-cycle") {
    const auto g = weighted_cycle<Rational>();
    const VertexFunction<Rational> f(std::vector<Rational>{1, 2, 4, 8});
    const auto lap = laplacian_apply(g, f);
    // hand computation: a: 1(1-2)+3(1-8), b: 1(2-1)+2(2-4), c: 2(4-2)+1(4-8), d: 1(8-4)+3(8-1)
    CHECK(lap == VertexFunction<Rational>(std::vector<Rational>{-22, -3, 0, 25}));
    const auto tf = transfer_apply(g, f);
    CHECK(tf[0] == Rational(1 * 2 + 3 * 8, 4));
    CHECK(tf[1] == Rational(1 * 1 + 2 * 4, 3));
    CHECK(g.total_conductance(0) == Rational(4));
    CHECK(g.total_conductance(2) == Rational(3));
  }

  TEST_CASE("energy norm on the four-cycle") {
    const auto g = weighted_cycle<Rational>();
    const VertexFunction<Rational> f(std::vector<Rational>{1, 2, 4, 8});
    // 1·1² + 2·2² + 1·4² + 3·7²
    CHECK(energy_inner(g, f, f) == Rational(172));
    CHECK(energy_inner(g, f, constant(g, Rational(5))) == Rational(0));
  }

  TEST_CASE("transfer equals identity minus laplacian over c(x), exactly") {
    const auto g = weighted_cycle<Rational>();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      VertexFunction<Rational> f(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) f[i] = Rational(static_cast<std::int64_t>(rng() % 41) - 20, 1 + rng() % 7);
      const auto tf = transfer_apply(g, f);
      const auto lap = laplacian_apply(g, f);
      for (std::size_t x = 0; x < g.size(); ++x) CHECK(tf[x] == f[x] - lap[x] / g.total_conductance(x));
    }
  }

  TEST_CASE("Green identity and quadratic forms on random graphs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
      const auto g = random_graph(rng, 3 + rng() % 12);
      const auto u = random_complex(rng, g.size());
      const auto v = random_complex(rng, g.size());
      const auto green = l2_inner(u, laplacian_apply(g, v));
      CHECK(std::abs(energy_inner(g, u, v) - green) <= 1e-10 * (1.0 + std::abs(green)));

      const double l2_form = quadratic_form_l2(g, u);
      const double l2_direct = l2_inner(u, laplacian_apply(g, u)).real();
      CHECK(l2_form == doctest::Approx(l2_direct).epsilon(1e-12));

      const double e_form = quadratic_form_energy(g, u);
      const double e_direct = energy_inner(g, u, laplacian_apply(g, u)).real();
      CHECK(e_form == doctest::Approx(e_direct).epsilon(1e-10));
      CHECK(l2_form >= -1e-12);
    }
  }

  TEST_CASE("energy inner product is conjugate-linear in the first slot") {
    const auto g = weighted_cycle<double>();
    std::mt19937_64 rng(5);
    const auto u = random_complex(rng, 4);
    const auto v = random_complex(rng, 4);
    const std::complex<double> a{0.3, -1.7};
    VertexFunction<std::complex<double>> au(4);
    for (std::size_t i = 0; i < 4; ++i) au[i] = a * u[i];
    const auto lhs = energy_inner(g, au, v);
    const auto rhs = std::conj(a) * energy_inner(g, u, v);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    CHECK(std::abs(energy_inner(g, u, v) - std::conj(energy_inner(g, v, u))) < 1e-12);
  }

  TEST_CASE("conductance-weighted sums are invariant under T, exactly") {
    const auto g = weighted_cycle<Rational>();
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      VertexFunction<Rational> f(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) f[i] = Rational(static_cast<std::int64_t>(rng() % 19) - 9, 1 + rng() % 5);
      CHECK(conductance_sum(g, transfer_apply(g, f)) == conductance_sum(g, f));
    }
  }

  TEST_CASE("random walk is reversible: c(x)p(x,y) = c(y)p(y,x)") {
    const auto g = weighted_cycle<Rational>();
    for (std::size_t x = 0; x < g.size(); ++x) {
      for (const auto& nb : g.neighbors(x)) {
        const Rational pxy = nb.c / g.total_conductance(x);
        Rational cyx;
        for (const auto& back : g.neighbors(nb.vertex)) {
          if (back.vertex == x) cyx = back.c;
        }
        const Rational pyx = cyx / g.total_conductance(nb.vertex);
        CHECK(g.total_conductance(x) * pxy == g.total_conductance(nb.vertex) * pyx);
      }
    }
  }

  TEST_CASE("construction enforces every axiom") {
    CHECK(axiom_of(R"({"vertices":[],"edges":[],"origin":"a"})") == GraphAxiom::kNonEmpty);
    CHECK(axiom_of(R"({"vertices":["a","a"],"edges":[],"origin":"a"})") == GraphAxiom::kUniqueVertices);
    CHECK(axiom_of(R"({"vertices":["a","b"],"edges":[{"u":"a","v":"z","c":1}],"origin":"a"})") ==
          GraphAxiom::kKnownVertices);
    CHECK(axiom_of(R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","c":1}],"origin":"q"})") ==
          GraphAxiom::kOriginPresent);
    CHECK(axiom_of(R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","c":1},{"u":"b","v":"a","c":2}],"origin":"a"})") ==
          GraphAxiom::kEdgeSymmetry);
    CHECK(axiom_of(R"({"vertices":["a","b"],"edges":[{"u":"a","v":"a","c":1},{"u":"a","v":"b","c":1}],"origin":"a"})") ==
          GraphAxiom::kNoSelfLoops);
    CHECK(axiom_of(R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","c":0}],"origin":"a"})") ==
          GraphAxiom::kPositiveConductance);
    CHECK(axiom_of(R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","c":-1}],"origin":"a"})") ==
          GraphAxiom::kPositiveConductance);
    CHECK(axiom_of(R"({"vertices":["a","b","c"],"edges":[{"u":"a","v":"b","c":1}],"origin":"a"})") ==
          GraphAxiom::kConnected);
  }

  TEST_CASE("repeated edges with equal conductance collapse to one") {
    const auto g = parse_graph_json(
        R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","c":2},{"u":"b","v":"a","c":2}],"origin":"a"})");
    CHECK(g.edges().size() == 1);
    CHECK(g.total_conductance(0) == 2.0);
  }

  TEST_CASE("JSON loading: integer ids, format errors, round trip") {
    const auto g = parse_graph_json(R"({"vertices":[0,1,2],"edges":[{"u":0,"v":1,"c":1.5},{"u":1,"v":2,"c":0.5}],"origin":1})");
    CHECK(g.size() == 3);
    CHECK(g.id(g.origin()) == "1");
    CHECK(g.index_of("2").value() == 2);
    CHECK_THROWS_AS(parse_graph_json("{not json"), GraphFormatError);
    CHECK_THROWS_AS(parse_graph_json(R"({"vertices":["a"]})"), GraphFormatError);
    CHECK_THROWS_AS(parse_graph_json(R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","c":"x"}],"origin":"a"})"),
                    GraphFormatError);
    CHECK_THROWS_AS(load_graph_json("/nonexistent/graph.json"), GraphFormatError);

    const auto again = parse_graph_json(graph_to_json(g));
    CHECK(again.size() == g.size());
    CHECK(again.origin() == g.origin());
    for (std::size_t x = 0; x < g.size(); ++x) CHECK(again.total_conductance(x) == g.total_conductance(x));

    const auto file = load_graph_json(std::string(SPECTRAL_WALKS_TEST_DATA) + "/cycle4.json");
    CHECK(file.size() == 4);
    const auto exact = to_exact(file);
    REQUIRE(exact.has_value());
    CHECK(exact->total_conductance(0) == Rational(4));
  }

  TEST_CASE("functions must live on the graph") {
    const auto g = weighted_cycle<double>();
    CHECK_THROWS_AS(laplacian_apply(g, VertexFunction<double>(3)), VertexMismatch);
    CHECK_THROWS_AS(l2_inner(VertexFunction<double>(3), VertexFunction<double>(4)), VertexMismatch);
  }
}
