#pragma once

// Test-only reference computations. These deliberately avoid the library's
// bitset enumeration and incremental sums so they can cross-check it.

#include <cstdint>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include <flexdesign/flexdesign.hpp>

namespace oracle {

struct Cut {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
};

/// Evaluates s(U \ L) + d(Gamma(L)) for every L from scratch.
inline Cut naive_min_cut(const flexdesign::DesignGraph& g, const flexdesign::Scenario& sc) {
  Cut best;
  const std::uint64_t limit = std::uint64_t{1} << g.m();
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    std::set<std::size_t> gamma;
    double outside = 0.0;
    for (std::size_t u = 0; u < g.m(); ++u) {
      if (mask >> u & 1) {
        for (auto v : g.neighbors(u)) gamma.insert(v);
      } else {
        outside += sc.supply[u];
      }
    }
    double d = 0.0;
    for (auto v : gamma) d += sc.demand[v];
    if (outside + d < best.value) best = {outside + d, mask};
  }
  return best;
}

/// Direct transcription of the thresholded importance weights.
inline std::vector<double> naive_importance(const std::vector<double>& means, double c) {
  const double floor = c / static_cast<double>(means.size());
  double total = 0.0;
  for (double x : means) total += x > floor ? x : floor;
  std::vector<double> out;
  for (double x : means) out.push_back((x > floor ? x : floor) / total);
  return out;
}

/// Small random instance with a mix of laws; means normalized.
inline flexdesign::ProductionSystem random_system(std::size_t m, std::size_t n,
                                                  std::uint64_t seed) {
  flexdesign::CounterRng rng(seed);
  std::vector<double> s(m), d(n);
  for (auto& x : s) x = 0.05 + rng.uniform();
  for (auto& x : d) x = 0.05 + rng.uniform();
  return flexdesign::make_instance_from_means(std::move(s), std::move(d));
}

inline flexdesign::Method method_for(std::size_t i) {
  constexpr flexdesign::Method methods[] = {flexdesign::Method::TPC, flexdesign::Method::WPC,
                                            flexdesign::Method::UPC, flexdesign::Method::FULL};
  return methods[i % 4];
}

/// Random (design, scenario) pair with 1 <= m, n <= max_side.
struct Case {
  flexdesign::ProductionSystem system;
  flexdesign::DesignGraph design;
  flexdesign::Scenario scenario;
};

inline Case random_case(std::uint64_t seed, std::size_t max_side = 10) {
  flexdesign::CounterRng rng(seed);
  const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_side));
  const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_side));
  auto system = random_system(m, n, rng());
  flexdesign::ConstructionConfig cfg;
  cfg.gamma_mode = flexdesign::DirectGamma{0.5 + 3.0 * rng.uniform()};
  cfg.seed = rng();
  auto design = flexdesign::build_design(system, cfg, method_for(static_cast<std::size_t>(rng() % 4)));
  auto scenario = flexdesign::sample_scenario(system, rng());
  return {std::move(system), std::move(design), std::move(scenario)};
}

}  // namespace oracle
