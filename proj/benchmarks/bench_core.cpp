#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ccn/alloc.hpp"
#include "ccn/config.hpp"
#include "ccn/geometry.hpp"
#include "ccn/random.hpp"
#include "ccn/sim.hpp"

namespace {

using namespace ccn;

void BM_Solve(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto M = static_cast<std::size_t>(std::ceil(std::pow(double(n), 0.9)));
  const double a = 2.0 * std::log(double(n)) / double(n);
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(M, 0.8), n, 1.0, a);
  for (auto _ : state) benchmark::DoNotOptimize(solve(prob));
  state.SetComplexityN(static_cast<int64_t>(M));
}
BENCHMARK(BM_Solve)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity();

void BM_Nearest(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  auto rng = make_stream(1, Stream::kScratch);
  std::vector<TorusPoint> pts(count);
  for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};
  std::vector<std::uint32_t> ids(count);
  for (std::uint32_t i = 0; i < count; ++i) ids[i] = i;
  const HolderIndex index(pts, ids, HolderIndex::default_buckets(count));
  for (auto _ : state) benchmark::DoNotOptimize(index.nearest({uniform01(rng), uniform01(rng)}));
}
BENCHMARK(BM_Nearest)->RangeMultiplier(10)->Range(10, 100000);

void BM_CellsOnSegment(benchmark::State& state) {
  const CellGrid grid(static_cast<int>(state.range(0)));
  auto rng = make_stream(2, Stream::kScratch);
  for (auto _ : state) {
    const auto seg = Segment::geodesic({uniform01(rng), uniform01(rng)}, {uniform01(rng), uniform01(rng)});
    benchmark::DoNotOptimize(cells_on_segment(seg, grid));
  }
}
BENCHMARK(BM_CellsOnSegment)->Arg(9)->Arg(66)->Arg(512);

void BM_SimulateOnce(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.n = static_cast<std::uint64_t>(state.range(0));
  cfg.alpha = 0.8;
  cfg.beta = 0.9;
  const auto pop = make_popularity(cfg);
  const auto prob = make_problem(cfg, pop);
  const auto X = round_to_integers(solve(prob), prob);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_once(cfg, pop, X, ++seed));
}
BENCHMARK(BM_SimulateOnce)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
