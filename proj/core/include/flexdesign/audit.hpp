#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexdesign/construct.hpp"
#include "flexdesign/system.hpp"

namespace flexdesign {

struct AuditConfig {
  double epsilon = 0.1;
  double kappa = 1.0;
  double delta = 1.0 / 3.0;
  /// Defaults to 1/(2 kappa) when unset.
  std::optional<double> tau;
  double c_L = 5.0 / 6.0;
  double gamma = 0.0;
  std::size_t max_enumeration_m = 20;

  double effective_tau() const { return tau.value_or(1.0 / (2.0 * kappa)); }
  void validate() const;
};

/// The subset where lhs - rhs is smallest.
struct AuditViolation {
  std::vector<std::size_t> subset;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

struct AuditReport {
  std::string condition;
  bool pass = true;
  /// Empty when no subset qualified for the condition.
  std::optional<AuditViolation> worst;
  std::size_t subsets_checked = 0;
};

/// d(Gamma(L)) + s(U \ L) >= 1 - 2 eps for every L; equivalent to Z_G >= 1 - 2 eps.
AuditReport cut_condition_audit(const DesignGraph& graph, const Scenario& scenario, double epsilon,
                                std::size_t max_m = 20);

/// For every L: d(Gamma(L)) >= s(L) - eps, or else with K = V \ Gamma(L),
/// s(Gamma(K)) >= d(K) - eps. A subset fails only when both fail; its gap is
/// the larger of the two side gaps.
AuditReport either_or_audit(const DesignGraph& graph, const Scenario& scenario,
                            const AuditConfig& config);

/// For every L with q(L) >= c_L eps / kappa:
/// d(Gamma(L)) >= min{1 - delta, (kappa / c_L) q(L)}.
AuditReport expansion_audit_demand(const DesignGraph& graph, const ImportanceProfile& profile,
                                   const Scenario& scenario, const AuditConfig& config);

/// For every L with q(L) >= tau: p(Gamma(L)) >= 1 - tau. Scenario-free.
AuditReport expansion_audit_importance(const DesignGraph& graph, const ImportanceProfile& profile,
                                       const AuditConfig& config);

struct NeighborProbability {
  double empirical = 0.0;
  /// 1 - exp(-p(v) * gamma * n_bar * q(L)).
  double lower_bound = 0.0;
  /// Binomial standard deviation of the estimate at the bound.
  double sigma = 0.0;
  std::size_t trials = 0;
  /// empirical >= lower_bound - 3 sigma.
  bool consistent = true;
};

/// Resamples the design `trials` times from `profile` and measures how often
/// v lands in Gamma(L).
NeighborProbability neighbor_probability_check(const ImportanceProfile& profile, double gamma,
                                               const std::vector<std::size_t>& L, std::size_t v,
                                               std::size_t trials, std::uint64_t seed);

}  // namespace flexdesign
