#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "rpca/dataio.hpp"
#include "rpca/knngraph.hpp"
#include "rpca/rpca.hpp"

namespace {

using rpca::Index;

const rpca::LabeledDataset& benchmark_data(Index n) {
  static std::vector<std::pair<Index, rpca::LabeledDataset>> cache;
  for (const auto& [size, ds] : cache)
    if (size == n) return ds;
  cache.emplace_back(n, rpca::generate_benchmark(7, n));
  return cache.back().second;
}

void BM_KnnNeighbors(benchmark::State& state) {
  const auto& x = benchmark_data(state.range(0)).data.values;
  rpca::GraphParams gp;
  gp.k = state.range(0) / 5;
  for (auto _ : state) benchmark::DoNotOptimize(rpca::knn_neighbors(x, gp));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KnnNeighbors)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SmoothSigma(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::vector<double> d(static_cast<std::size_t>(state.range(0)));
  for (auto& v : d) v = u(rng);
  std::sort(d.begin(), d.end());
  rpca::GraphParams gp;
  gp.k = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(rpca::smooth_sigma(d, d.front(), gp));
}
BENCHMARK(BM_SmoothSigma)->Arg(15)->Arg(100)->Arg(580);

void BM_Symmetrize(benchmark::State& state) {
  const auto& x = benchmark_data(state.range(0)).data.values;
  rpca::GraphParams gp;
  gp.k = 15;
  const auto graph = rpca::build_graph(x, gp);
  for (auto _ : state) benchmark::DoNotOptimize(rpca::symmetrize(graph.weights));
}
BENCHMARK(BM_Symmetrize)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FitRpca(benchmark::State& state) {
  const auto& x = benchmark_data(state.range(0)).data.values;
  rpca::GraphParams gp;
  gp.k = state.range(0) / 5;
  for (auto _ : state) benchmark::DoNotOptimize(rpca::fit_rpca(x, gp));
}
BENCHMARK(BM_FitRpca)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ClassicalPca(benchmark::State& state) {
  const auto& x = benchmark_data(state.range(0)).data.values;
  for (auto _ : state) benchmark::DoNotOptimize(rpca::classical_pca(x, 2));
}
BENCHMARK(BM_ClassicalPca)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
