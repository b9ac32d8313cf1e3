#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "gridlodf/forests.hpp"

namespace {

using namespace gridlodf;

void BM_SpanningTreesComplete(benchmark::State& state) {
  const Network net = testing::complete_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spanning_trees(net));
}
BENCHMARK(BM_SpanningTreesComplete)->Arg(4)->Arg(5)->Arg(6);

void BM_ForestEnumerator(benchmark::State& state) {
  const Network net = testing::complete_graph(6);
  for (auto _ : state) {
    const ForestEnumerator forests(net);
    benchmark::DoNotOptimize(forests.signed_expansion(0, 14));
  }
}
BENCHMARK(BM_ForestEnumerator)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
