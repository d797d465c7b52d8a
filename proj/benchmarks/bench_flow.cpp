#include <benchmark/benchmark.h>
#include <flexdesign/flexdesign.hpp>

using namespace flexdesign;

static void BM_MaxFlowTwoLevel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double gamma = static_cast<double>(state.range(1));
  auto sys = make_two_level_instance(n, 0.1);
  auto g = build_design(sys, {DirectGamma{gamma}, 0.5, 1}, Method::TPC);
  auto sc = sample_scenario(sys, 2);
  for (auto _ : state) benchmark::DoNotOptimize(max_fulfilled_demand(g, sc).value);
  state.counters["edges"] = static_cast<double>(g.edge_count());
}
BENCHMARK(BM_MaxFlowTwoLevel)->Args({100, 5})->Args({100, 10})->Args({100, 30})->Args({400, 10});

static void BM_MaxFlowFull(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto sys = make_uniform_instance(n, n, 3);
  auto g = DesignGraph::full(n, n);
  auto sc = sample_scenario(sys, 4);
  for (auto _ : state) benchmark::DoNotOptimize(max_fulfilled_demand(g, sc).value);
}
BENCHMARK(BM_MaxFlowFull)->Arg(50)->Arg(100);
