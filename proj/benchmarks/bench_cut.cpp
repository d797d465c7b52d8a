#include <benchmark/benchmark.h>
#include <flexdesign/flexdesign.hpp>

using namespace flexdesign;

static void BM_MinCutEnumeration(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  auto sys = make_uniform_instance(m, m, 5);
  auto g = build_design(sys, {DirectGamma{3.0}, 0.5, 6}, Method::TPC);
  auto sc = sample_scenario(sys, 7);
  for (auto _ : state) benchmark::DoNotOptimize(min_cut_bruteforce(g, sc).value);
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << m));
}
BENCHMARK(BM_MinCutEnumeration)->DenseRange(8, 16, 4);

static void BM_EitherOrAudit(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  auto sys = make_uniform_instance(m, m, 5);
  auto g = build_design(sys, {DirectGamma{8.0}, 0.5, 6}, Method::TPC);
  auto sc = sample_scenario(sys, 7);
  AuditConfig cfg;
  cfg.epsilon = 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(either_or_audit(g, sc, cfg).pass);
}
BENCHMARK(BM_EitherOrAudit)->Arg(12)->Arg(16);
