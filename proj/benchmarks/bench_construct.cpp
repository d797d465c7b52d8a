#include <benchmark/benchmark.h>
#include <flexdesign/flexdesign.hpp>

using namespace flexdesign;

static void BM_BuildDesign(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto sys = make_pareto_instance(n, n, 0.5, 50, 1);
  ConstructionConfig cfg{DirectGamma{10.0}, 0.5, 0};
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(build_design(sys, cfg, Method::TPC).edge_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_BuildDesign)->Arg(100)->Arg(400)->Arg(1000);

static void BM_ImportanceProfile(benchmark::State& state) {
  auto sys = make_uniform_instance(static_cast<std::size_t>(state.range(0)), 100, 2);
  for (auto _ : state) benchmark::DoNotOptimize(importance_profile(sys, 0.2).n_q);
}
BENCHMARK(BM_ImportanceProfile)->Arg(1000)->Arg(100000);
