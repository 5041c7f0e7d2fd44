// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "modalssc/analysis.hpp"
#include "modalssc/io.hpp"

using namespace modalssc;

namespace {

LoopDigraph random_graph(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(0.2), strong(0.6), loop(0.5);
  std::uniform_int_distribution<int> w(1, 3);
  std::vector<int> weights(n);
  for (auto& x : weights) x = w(rng);
  LoopDigraph g(n, weights);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u == v ? loop(rng) : edge(rng))
        g.add_edge(u, v, strong(rng) ? EdgeKind::Strong : EdgeKind::Weak);
  return g;
}

void BM_MinZfsParallel(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) benchmark::DoNotOptimize(min_zfs(g, 30));
}

void BM_MinZfsSerial(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) benchmark::DoNotOptimize(min_zfs_serial(g, 30));
}

NetworkSpec example() { return load_network(std::string(MODALSSC_DATA_DIR) + "/example14.json"); }

VerificationOptions verify_options(int trials) {
  VerificationOptions opt;
  opt.trials = trials;
  opt.claims.controllable = true;
  return opt;
}

void BM_MonteCarloParallel(benchmark::State& state) {
  const auto spec = example();
  const auto opt = verify_options(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_verify(spec, opt));
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto spec = example();
  const auto opt = verify_options(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_verify_serial(spec, opt));
}

}  // namespace

BENCHMARK(BM_MinZfsParallel)->Arg(14)->Arg(18)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MinZfsSerial)->Arg(14)->Arg(18)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloParallel)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloSerial)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
