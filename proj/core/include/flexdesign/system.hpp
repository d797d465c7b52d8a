#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flexdesign {

enum class DistributionKind { deterministic, two_point, scaled_two_point, multinomial_allocated };

std::string to_string(DistributionKind kind);
DistributionKind parse_distribution_kind(const std::string& text);

/// Law of one node's random capacity, relative to the node's mean.
///
/// - deterministic: always the mean.
/// - two_point: 0 or 2*mean, each with probability 1/2.
/// - scaled_two_point: factor*mean with probability `prob`, otherwise the
///   low value (1 - prob*factor)/(1 - prob)*mean that keeps the mean exact.
/// - multinomial_allocated: the nodes of one side sharing this kind split
///   `total` in `units` equal pieces; each piece lands on a node with
///   probability proportional to `weight`. The totals are conserved, so the
///   marginals are negatively associated.
struct DistributionSpec {
  DistributionKind kind = DistributionKind::deterministic;
  double factor = 2.0;
  double prob = 0.5;
  double total = 0.0;
  double weight = 0.0;
  std::uint32_t units = 0;

  static DistributionSpec deterministic() { return {}; }
  static DistributionSpec two_point() { return {.kind = DistributionKind::two_point}; }
  static DistributionSpec scaled_two_point(double factor, double prob) {
    return {.kind = DistributionKind::scaled_two_point, .factor = factor, .prob = prob};
  }
  static DistributionSpec multinomial(double total, double weight, std::uint32_t units) {
    return {.kind = DistributionKind::multinomial_allocated,
            .total = total,
            .weight = weight,
            .units = units};
  }

  /// Largest realizable value divided by the mean. For multinomial nodes
  /// `group_weight` is the sum of weights over the allocation group.
  double support_ratio(double group_weight = 0.0) const;

  bool operator==(const DistributionSpec&) const = default;
};

/// Supply nodes U and demand nodes V with their mean capacities and laws.
/// Immutable once built; the constructor rejects structurally invalid input.
class ProductionSystem {
 public:
  ProductionSystem(std::vector<double> mean_supply, std::vector<double> mean_demand,
                   std::vector<DistributionSpec> supply_dist,
                   std::vector<DistributionSpec> demand_dist, double kappa);

  std::size_t m() const noexcept { return mean_supply_.size(); }
  std::size_t n() const noexcept { return mean_demand_.size(); }
  std::size_t n_bar() const noexcept { return m() > n() ? m() : n(); }
  double kappa() const noexcept { return kappa_; }

  std::span<const double> mean_supply() const noexcept { return mean_supply_; }
  std::span<const double> mean_demand() const noexcept { return mean_demand_; }
  std::span<const DistributionSpec> supply_dist() const noexcept { return supply_dist_; }
  std::span<const DistributionSpec> demand_dist() const noexcept { return demand_dist_; }

  double total_mean_supply() const noexcept;
  double total_mean_demand() const noexcept;
  bool is_normalized(double tol = 1e-12) const noexcept;

  bool operator==(const ProductionSystem&) const = default;

 private:
  std::vector<double> mean_supply_;
  std::vector<double> mean_demand_;
  std::vector<DistributionSpec> supply_dist_;
  std::vector<DistributionSpec> demand_dist_;
  double kappa_;
};

/// One realization of supplies s(u) and demands d(v).
struct Scenario {
  std::vector<double> supply;
  std::vector<double> demand;
  std::uint64_t seed = 0;

  double total_supply() const noexcept;
  double total_demand() const noexcept;

  bool operator==(const Scenario&) const = default;
};

struct AssumptionViolation {
  enum class Side { supply, demand, system };
  Side side;
  std::optional<std::size_t> node;
  std::string reason;
};

struct AssumptionReport {
  bool kappa_ok = true;
  bool mean_bound_ok = true;
  bool balance_ok = true;
  double mean_bound = 0.0;
  double max_mean_supply = 0.0;
  double max_mean_demand = 0.0;
  std::vector<AssumptionViolation> violations;

  bool all_ok() const noexcept { return kappa_ok && mean_bound_ok && balance_ok; }
};

/// Rescales all means (and multinomial totals) so each side sums to one.
/// Throws InvalidInstance when either side has zero total mean.
ProductionSystem normalize(const ProductionSystem& system);

/// Draws every node from its law. Pure function of (system, seed).
Scenario sample_scenario(const ProductionSystem& system, std::uint64_t seed);

/// Evaluates bounded variation, the per-node mean bound c*eps^2/(kappa^3 ln n_bar)
/// and the implied balance condition min(n,m)/ln n_bar >= kappa^3/(c eps^2).
/// Advisory only.
AssumptionReport check_assumptions(const ProductionSystem& system, double epsilon,
                                   double c = 0.9);

/// Balanced two-level family: n/2 deterministic supplies at (2-alpha)/n,
/// n/2 at alpha/n, i.i.d. two-point demands with mean 1/n.
ProductionSystem make_two_level_instance(std::size_t n, double alpha);

/// Means drawn i.i.d. from Pareto(scale 1, shape beta), truncated at `cap`,
/// then normalized. Deterministic supplies, two-point demands.
ProductionSystem make_pareto_instance(std::size_t m, std::size_t n, double beta, double cap,
                                      std::uint64_t seed);

/// Means drawn from U[0,1] (exact zeros re-drawn), then normalized.
ProductionSystem make_uniform_instance(std::size_t m, std::size_t n, std::uint64_t seed);

/// Same construction as make_uniform_instance with an injected draw source.
ProductionSystem make_uniform_instance(std::size_t m, std::size_t n,
                                       const std::function<double()>& draw);

/// Deterministic supplies and two-point demands over the given raw means,
/// normalized. Used by the generators and by the `custom` CLI family.
ProductionSystem make_instance_from_means(std::vector<double> raw_supply,
                                          std::vector<double> raw_demand);

}  // namespace flexdesign
