#include <benchmark/benchmark.h>

#include "chronnet/chronnet.hpp"
#include "chronnet/datagen.hpp"
#include "chronnet/measures.hpp"
#include "chronnet/mining.hpp"

using namespace chronnet;

namespace {

const ScenarioSpec& spec() {
  static const ScenarioSpec s = make_scenario("power-law", 1, {{"T", 200000}});
  return s;
}

const EventSet& events() {
  static const EventSet es = generate_events(spec());
  return es;
}

const Chronnet& network() {
  static const Chronnet c = prune(undirect(build(events(), spec().grid)), 2.0);
  return c;
}

void BM_Build(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build(events(), spec().grid));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * events().size()));
}
BENCHMARK(BM_Build)->Unit(benchmark::kMillisecond);

void BM_BuildParallel(benchmark::State& state) {
  const auto chunks = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_parallel(events(), spec().grid, {}, chunks));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * events().size()));
}
BENCHMARK(BM_BuildParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Centrality(benchmark::State& state) {
  const auto kind = static_cast<CentralityKind>(state.range(0));
  state.SetLabel(to_string(kind));
  for (auto _ : state) benchmark::DoNotOptimize(centrality(network(), kind));
}
BENCHMARK(BM_Centrality)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_PathStats(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(path_stats(network(), state.range(0) != 0));
}
BENCHMARK(BM_PathStats)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FastGreedy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fast_greedy(network()));
}
BENCHMARK(BM_FastGreedy)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
