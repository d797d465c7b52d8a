// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <flexdesign/flexdesign.hpp>

#include "oracles.hpp"

using namespace flexdesign;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::function<Outcome()>& body, double time_limit_s = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0.0 && secs >= time_limit_s) {
    out.pass = false;
    out.detail += "; over the " + std::to_string(static_cast<int>(time_limit_s)) + " s limit";
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Random (design, scenario) pairs shared by criteria 1 and 8.
std::vector<oracle::Case> duality_cases() {
  std::vector<oracle::Case> cases;
  for (std::uint64_t i = 0; i < 500; ++i) cases.push_back(oracle::random_case(derive_seed(2024, i), 10));
  return cases;
}

struct Comparison {
  std::size_t points = 0;
  std::size_t tpc_ahead = 0;
  double gap_at_5 = 0.0;
  double tpc_at_10 = 0.0;
  std::string worst;
};

Comparison compare_tpc_wpc(const InstanceSource& source) {
  auto plan = ExperimentPlan::desk_scale(source, 1);
  plan.threshold_c = 0.5;
  const auto table = run_ratio_experiment(plan);
  Comparison c;
  double worst_gap = 1.0;
  for (double gamma : plan.gamma_grid) {
    const double tpc = table.find(Method::TPC, gamma)->mean_ratio;
    const double wpc = table.find(Method::WPC, gamma)->mean_ratio;
    ++c.points;
    if (tpc >= wpc) ++c.tpc_ahead;
    if (gamma == 5) c.gap_at_5 = tpc - wpc;
    if (gamma == 10) c.tpc_at_10 = tpc;
    if (tpc - wpc < worst_gap) {
      worst_gap = tpc - wpc;
      c.worst = fmt("gamma=%g TPC %.6f WPC %.6f", gamma, tpc, wpc);
    }
  }
  return c;
}

}  // namespace

int main() {
  const auto cases = duality_cases();

  criterion(1, [&] {
    double worst = 0.0;
    for (const auto& c : cases)
      worst = std::max(worst, std::abs(max_fulfilled_demand(c.design, c.scenario).value -
                                       min_cut_bruteforce(c.design, c.scenario).value));
    return Outcome{worst <= 1e-9, fmt("max |flow - cut| = %.3g over 500 pairs (tol 1e-9)", worst)};
  }, 10.0);

  criterion(2, [] {
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      auto sys = oracle::random_system(1 + t % 40, 1 + (t * 7) % 35, derive_seed(3, t));
      auto sc = sample_scenario(sys, derive_seed(4, t));
      const double z = max_fulfilled_demand(DesignGraph::full(sys.m(), sys.n()), sc).value;
      worst = std::max(worst, std::abs(z - std::min(sc.total_supply(), sc.total_demand())));
    }
    return Outcome{worst <= 1e-12, fmt("max |Z_F - min totals| = %.3g over 100 trials (tol 1e-12)", worst)};
  });

  criterion(3, [] {
    const auto a1 = compare_tpc_wpc(TwoLevelFamily{100, 0.1});
    const auto a2 = compare_tpc_wpc(TwoLevelFamily{100, 0.2});
    const bool pass = a1.tpc_at_10 > 0.985 && a1.tpc_ahead == a1.points && a2.tpc_ahead == a2.points;
    return Outcome{pass, fmt("alpha=0.1 TPC@10 = %.6f (> 0.985); TPC >= WPC at %g/6 (alpha=0.1) and %g/6 "
                             "(alpha=0.2) grid points",
                             a1.tpc_at_10, double(a1.tpc_ahead), double(a2.tpc_ahead)) +
                             "; tightest " + a1.worst + " / " + a2.worst};
  }, 300.0);

  criterion(4, [] {
    const auto r = run_isolation_experiment(100, 0.1, 1.0 / (8 * 0.1), 1000, 4);
    return Outcome{r.freq_many_isolated >= 0.45,
                   fmt("freq(> n/4 isolated U2 nodes) = %.3f (>= 0.45), mean isolated %.2f of 50",
                       r.freq_many_isolated, r.mean_isolated_U2)};
  }, 30.0);

  criterion(5, [] {
    std::size_t bad_profiles = 0;
    double worst_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const std::size_t m = 5 + seed % 60, n = 5 + (seed * 13) % 70;
      auto sys = seed % 2 ? make_pareto_instance(m, n, 0.3 + 0.002 * seed, 50, seed)
                          : make_uniform_instance(m, n, seed);
      auto prof = importance_profile(sys, 0.2);
      worst_sum = std::max({worst_sum, std::abs(std::accumulate(prof.q.begin(), prof.q.end(), 0.0) - 1.0),
                            std::abs(std::accumulate(prof.p.begin(), prof.p.end(), 0.0) - 1.0)});
      bool ok = true;
      for (std::size_t u = 0; u < m; ++u) ok &= prof.q[u] >= 5.0 / 6.0 * sys.mean_supply()[u];
      for (std::size_t v = 0; v < n; ++v) ok &= prof.p[v] >= 5.0 / 6.0 * sys.mean_demand()[v];
      bad_profiles += !ok;
    }
    auto sys = make_two_level_instance(100, 0.1);
    ConstructionConfig cfg{DirectGamma{10.0}, 0.2, 0};
    const double expected = expected_edge_count(sys, cfg, Method::TPC);
    std::size_t within = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      cfg.seed = derive_seed(5, seed);
      within += build_design(sys, cfg, Method::TPC).edge_count() <= 2 * expected;
    }
    const bool pass = worst_sum <= 1e-12 && bad_profiles == 0 && within >= 990;
    return Outcome{pass, fmt("max |sum - 1| = %.3g; %g/1000 profiles below 5/6 of the mean; |E| <= 2E|E| in "
                             "%g/1000 draws (>= 990)",
                             worst_sum, double(bad_profiles), double(within))};
  });

  criterion(6, [] {
    std::size_t mismatched_pairs = 0, mismatched_builds = 0, builds = 0;
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{10, 10}, {40, 25}, {100, 100}}) {
      auto sys = make_instance_from_means(std::vector<double>(m, 1.0), std::vector<double>(n, 1.0));
      for (double c : {0.2, 0.5}) {
        auto tpc = profile_for(Method::TPC, sys, c);
        auto wpc = profile_for(Method::WPC, sys, c);
        for (double gamma : {1.0, 5.0, 10.0})
          for (std::size_t u = 0; u < m; ++u)
            for (std::size_t v = 0; v < n; ++v)
              mismatched_pairs += edge_probability(tpc, gamma, u, v) != edge_probability(wpc, gamma, u, v);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
          ConstructionConfig cfg{DirectGamma{5.0}, c, seed};
          ++builds;
          mismatched_builds += !(build_design(sys, cfg, Method::TPC) == build_design(sys, cfg, Method::WPC));
        }
      }
    }
    return Outcome{mismatched_pairs == 0 && mismatched_builds == 0,
                   fmt("%g mismatched edge probabilities, %g of %g seed-matched builds differ",
                       double(mismatched_pairs), double(mismatched_builds), double(builds))};
  });

  criterion(7, [] {
    const auto p05 = compare_tpc_wpc(ParetoFamily{100, 100, 0.5, 50, 1});
    const auto p15 = compare_tpc_wpc(ParetoFamily{100, 100, 1.5, 50, 1});
    const auto uni = compare_tpc_wpc(UniformFamily{100, 100, 1});
    const bool pass = p05.tpc_ahead == p05.points && uni.tpc_ahead == uni.points && p05.gap_at_5 > p15.gap_at_5;
    return Outcome{pass, fmt("TPC >= WPC at %g/6 (Pareto 0.5) and %g/6 (uniform) grid points; gap at gamma=5 "
                             "%.6f (beta 0.5) vs %.6f (beta 1.5)",
                             double(p05.tpc_ahead), double(uni.tpc_ahead), p05.gap_at_5, p15.gap_at_5) +
                             "; tightest Pareto " + p05.worst + ", uniform " + uni.worst};
  }, 300.0);

  criterion(8, [&] {
    std::size_t disagreements = 0, implication_checked = 0, implication_broken = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      const double eps = 0.02 + 0.4 * CounterRng(derive_seed(8, i)).uniform();
      const bool by_flow = max_fulfilled_demand(c.design, c.scenario).value >= 1.0 - 2.0 * eps;
      const bool cut = cut_condition_audit(c.design, c.scenario, eps).pass;
      disagreements += cut != by_flow;
      AuditConfig cfg;
      cfg.epsilon = eps;
      if (std::abs(c.scenario.total_supply() - 1) <= eps && std::abs(c.scenario.total_demand() - 1) <= eps &&
          either_or_audit(c.design, c.scenario, cfg).pass) {
        ++implication_checked;
        implication_broken += !cut;
      }
    }
    return Outcome{disagreements == 0 && implication_broken == 0,
                   fmt("cut audit vs flow disagree on %g/500; either-or pass without cut pass %g/%g",
                       double(disagreements), double(implication_broken), double(implication_checked))};
  });

  criterion(9, [] {
    auto sys = make_pareto_instance(20, 20, 0.8, 50, 9);
    auto prof = importance_profile(sys, ConstructionConfig::kTheoryThreshold);
    const double gamma = 2.0;
    std::size_t consistent = 0;
    double tightest = 1e9;
    for (std::uint64_t k = 0; k < 20; ++k) {
      CounterRng rng(derive_seed(9, k));
      std::vector<std::size_t> L;
      for (std::size_t u = 0; u < 20; ++u)
        if (rng.uniform() < 0.15) L.push_back(u);
      const std::size_t v = rng() % 20;
      auto r = neighbor_probability_check(prof, gamma, L, v, 10000, derive_seed(10, k));
      const bool ok = r.empirical >= r.lower_bound - 3 * r.sigma;
      consistent += ok;
      if (r.sigma > 0) tightest = std::min(tightest, (r.empirical - r.lower_bound) / r.sigma);
    }
    return Outcome{consistent == 20, fmt("%g/20 (L, v) pairs within 3 sigma of the bound; smallest margin %.2f sigma",
                                         double(consistent), tightest)};
  });

  std::printf("EXCLUDED criterion 10: asymptotic high-probability statements are not checked as certainties; "
              "covered by the pass-rate regressions in test_audit\n");
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
