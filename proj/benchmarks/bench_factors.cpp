#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "gridlodf/case_io.hpp"
#include "gridlodf/factors.hpp"
#include "gridlodf/generators.hpp"
#include "gridlodf/laplacian.hpp"
#include "gridlodf/lodf_matrix.hpp"

namespace {

using namespace gridlodf;

const Network& case118() {
  static const Network net =
      collapse_dangling(require_network(read_case_file(testing::data_path("case118.m")))).kept.network;
  return net;
}

void BM_LaplacianSystem118(benchmark::State& state) {
  const Network& net = case118();
  for (auto _ : state) benchmark::DoNotOptimize(LaplacianSystem(net));
}
BENCHMARK(BM_LaplacianSystem118)->Unit(benchmark::kMillisecond);

void BM_FullLodf118(benchmark::State& state) {
  const Network& net = case118();
  for (auto _ : state) benchmark::DoNotOptimize(full_lodf_matrix(net));
}
BENCHMARK(BM_FullLodf118)->Unit(benchmark::kMillisecond);

void BM_Glodf(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<Index>(state.range(0));
  const Network net = random_connected_network({.buses = n, .lines = 2 * n}, rng);
  const LaplacianSystem sys(net);
  std::vector<Index> trip;
  for (Index l = 0; l < net.line_count() && trip.size() < 3; ++l) {
    trip.push_back(l);
    if (!net.connected_without(trip)) trip.pop_back();
  }
  for (auto _ : state) benchmark::DoNotOptimize(glodf(net, sys, trip));
}
BENCHMARK(BM_Glodf)->Arg(20)->Arg(60)->Arg(120);

}  // namespace
