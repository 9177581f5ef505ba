// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "fixtures.hpp"
#include "immunet/embed.hpp"
#include "immunet/immunize.hpp"
#include "immunet/kernels.hpp"
#include "immunet/simulate.hpp"
#include "immunet/spectral.hpp"

using namespace immunet;

namespace {

const IndexedGraph& big_graph() {
  static const IndexedGraph g = testing::barabasi_albert(200'000, 4, 1);
  return g;
}

const IndexedGraph& mid_graph() {
  static const IndexedGraph g = testing::barabasi_albert(5'000, 2, 2);
  return g;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::kSerial : Exec::kParallel; }

void BM_ShiftedSpmv(benchmark::State& state) {
  const auto& g = big_graph().graph;
  std::vector<double> x(g.num_nodes(), 1.0), y(g.num_nodes());
  for (auto _ : state) {
    if (state.range(0) == 0) {
      kernels::serial::shifted_spmv(g, x, y);
    } else {
      kernels::parallel::shifted_spmv(g, x, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}
BENCHMARK(BM_ShiftedSpmv)->Arg(0)->Arg(1);

void BM_Dot(benchmark::State& state) {
  std::vector<double> a(1 << 22, 0.5), b(1 << 22, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(state.range(0) == 0 ? kernels::serial::dot(a, b) : kernels::parallel::dot(a, b));
  }
}
BENCHMARK(BM_Dot)->Arg(0)->Arg(1);

void BM_PowerIteration(benchmark::State& state) {
  PowerIterationOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(largest_eigenpair(big_graph().graph, opts).lambda);
}
BENCHMARK(BM_PowerIteration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimulateSpread(benchmark::State& state) {
  const auto& g = mid_graph().graph;
  const std::vector<NodeId> seeds{0, 1, 2, 3, 4};
  SpreadConfig cfg;
  cfg.trials = 1000;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_spread(g, seeds, {}, cfg).mean_activated);
}
BENCHMARK(BM_SimulateSpread)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GenerateWalks(benchmark::State& state) {
  WalkOptions opts;
  opts.p = 0.5;
  opts.q = 2.0;
  opts.walks_per_node = 2;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(generate_walks(mid_graph().graph, opts).walks.size());
}
BENCHMARK(BM_GenerateWalks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SparseShield(benchmark::State& state) {
  const auto& g = big_graph().graph;
  const auto eig = largest_eigenpair(g);
  for (auto _ : state) benchmark::DoNotOptimize(sparseshield(g, eig, 1000, {}).blocked.size());
}
BENCHMARK(BM_SparseShield)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
