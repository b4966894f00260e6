// Serial vs parallel throughput of the hot kernels. The second benchmark
// argument selects the path: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "longnet/evaluation.hpp"
#include "longnet/saom.hpp"
#include "longnet/tergm.hpp"

using namespace longnet;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(1) ? Execution::parallel : Execution::serial;
}

DirectedNetwork random_network(Rng& rng, std::size_t n, double p) {
  DirectedNetwork net(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && rng.uniform() < p) net.set_tie(i, j, true);
  return net;
}

std::vector<StatisticSpec> specs() {
  return {StatisticSpec::of(StatKind::edges), StatisticSpec::of(StatKind::reciprocity),
          StatisticSpec::of(StatKind::transitive_triplets), StatisticSpec::of(StatKind::three_cycles),
          StatisticSpec::of(StatKind::memory_stability)};
}

void BM_MpleDesign(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<DirectedNetwork> waves;
  for (int t = 0; t < 5; ++t) waves.push_back(random_network(rng, n, 0.2));
  const NetworkPanel panel(waves);
  const TermSet terms(specs(), {}, n);
  for (auto _ : state) benchmark::DoNotOptimize(tergm::build_mple_design(panel, terms, 1, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4 * n * (n - 1)));
}

void BM_TieProbabilities(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::vector<DirectedNetwork> draws;
  for (int d = 0; d < 100; ++d) draws.push_back(random_network(rng, n, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(evaluation::tie_probabilities(draws, exec_of(state)));
}

void BM_Bootstrap(benchmark::State& state) {
  Rng rng(3);
  std::vector<DirectedNetwork> waves{random_network(rng, 20, 0.2)};
  for (int t = 1; t < 6; ++t) {
    auto next = waves.back();
    for (int k = 0; k < 40; ++k) {
      const auto i = rng.below(20), j = rng.below(20);
      if (i != j) next.toggle(i, j);
    }
    waves.push_back(next);
  }
  const NetworkPanel panel(waves);
  tergm::MpleOptions o;
  o.bootstrap_count = static_cast<std::size_t>(state.range(0));
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(tergm::fit_mple(panel, specs(), o));
}

void BM_SaomPredict(benchmark::State& state) {
  const saom::SaomModel model{{StatisticSpec::of(StatKind::edges), StatisticSpec::of(StatKind::reciprocity),
                               StatisticSpec::of(StatKind::transitive_triplets)},
                              {-1.5, 1.0, 0.2},
                              {40.0}};
  Rng rng(4);
  const auto start = random_network(rng, 20, 0.2);
  for (auto _ : state)
    benchmark::DoNotOptimize(saom::forward_predict(model, start, {}, static_cast<std::size_t>(state.range(0)), 9,
                                                   std::nullopt, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_MpleDesign)->ArgsProduct({{20, 60}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TieProbabilities)->ArgsProduct({{20, 100}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Bootstrap)->ArgsProduct({{50}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SaomPredict)->ArgsProduct({{100}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
