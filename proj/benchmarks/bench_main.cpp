#include <benchmark/benchmark.h>

#include <random>

#include "spectral_walks/gram.hpp"
#include "spectral_walks/jacobi.hpp"
#include "spectral_walks/markov.hpp"
#include "spectral_walks/solenoid.hpp"
#include "spectral_walks/tree.hpp"
#include "spectral_walks/wavelet.hpp"

using namespace spectral_walks;

static void BM_Eigh(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = z(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(eigh(a));
}
BENCHMARK(BM_Eigh)->Arg(16)->Arg(62)->Arg(126);

static void BM_GramSpectrum(benchmark::State& state) {
  const auto words = words_up_to(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(GramSpectrum::from_words(words));
}
BENCHMARK(BM_GramSpectrum)->Arg(4)->Arg(6);

static void BM_Simulate(benchmark::State& state) {
  const auto fm = FiniteMarkov::from_graph(tree_graph(3));
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(fm, 20, 100000, 7, threads));
  state.SetItemsProcessed(state.iterations() * 100000 * 20);
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_TransferApply(benchmark::State& state) {
  const TrigPoly w = w_from_filter(daubechies4_filter());
  TrigPoly f;
  for (int k = -static_cast<int>(state.range(0)); k <= state.range(0); ++k) f.add(k, 1.0 / (1.0 + k * k));
  for (auto _ : state) benchmark::DoNotOptimize(transfer_apply(w, f, 2));
}
BENCHMARK(BM_TransferApply)->Arg(8)->Arg(256);

static void BM_SolenoidWalk(benchmark::State& state) {
  const TrigPoly w = w_from_filter(daubechies4_filter());
  for (auto _ : state) benchmark::DoNotOptimize(solenoid_walk(w, 30, 20000, 3, UniformGrid{10}, 1));
  state.SetItemsProcessed(state.iterations() * 20000 * 30);
}
BENCHMARK(BM_SolenoidWalk)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
