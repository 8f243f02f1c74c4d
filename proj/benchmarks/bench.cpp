// Microbenchmarks for the three cost claims: one pseudo-inverse for the whole
// tensor, the Z route against SVD, and constant-time cached failure queries.

#include <benchmark/benchmark.h>

#include <random>

#include "rwnet/fundamental.hpp"
#include "rwnet/graph.hpp"
#include "rwnet/reachability.hpp"

namespace {

using rwnet::Index;

// Directed Hamiltonian cycle over a shuffled order plus sparse random chords.
rwnet::Graph random_graph(Index n, double extra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  rwnet::Matrix a = rwnet::Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>((i + 1) % n)]) = 1.0;
  std::bernoulli_distribution coin(extra);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && coin(rng)) a(i, j) = 1.0;
    }
  }
  return rwnet::Graph::from_adjacency(a, true);
}

rwnet::TransitionMatrix chain(Index n) {
  return rwnet::with_stationary(rwnet::transition_matrix(random_graph(n, 4.0 / static_cast<double>(n), 42)));
}

void BM_TensorOnePinv(benchmark::State& state) {
  const auto tm = chain(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rwnet::fundamental_tensor(tm));
}

void BM_TensorPerTargetInversions(benchmark::State& state) {
  const auto tm = chain(state.range(0));
  for (auto _ : state) {
    for (Index t = 0; t < tm.size(); ++t) {
      const Index target[] = {t};
      benchmark::DoNotOptimize(rwnet::fundamental_matrix(tm, target));
    }
  }
}

void BM_PinvSvd(benchmark::State& state) {
  const auto tm = chain(state.range(0));
  const rwnet::TensorOptions lazy{rwnet::LaplacianRoute::RandomWalk, 0};
  for (auto _ : state) benchmark::DoNotOptimize(rwnet::fundamental_tensor(tm, lazy));
}

void BM_PinvViaZ(benchmark::State& state) {
  const auto tm = chain(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rwnet::tensor_via_z(tm, *tm.stationary, 0));
}

void BM_CachedFailureQuery(benchmark::State& state) {
  const Index n = state.range(0);
  const auto oracle = rwnet::build_oracle(random_graph(n, 3.0 / static_cast<double>(n), 7));
  const std::vector<Index> failed{1, n / 2, n - 2};
  oracle.query_with_failures(0, n - 1, failed);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  for (auto _ : state) {
    Index s = pick(rng), t = pick(rng);
    if (s == 1 || s == n / 2 || s == n - 2) s = 0;
    if (t == 1 || t == n / 2 || t == n - 2) t = n - 1;
    benchmark::DoNotOptimize(oracle.query_with_failures(s, t, failed));
  }
}

}  // namespace

BENCHMARK(BM_TensorOnePinv)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TensorPerTargetInversions)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PinvSvd)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PinvViaZ)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CachedFailureQuery)->Arg(100)->Arg(1000);
BENCHMARK_MAIN();
