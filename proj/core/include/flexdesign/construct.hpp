#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flexdesign/system.hpp"

namespace flexdesign {

enum class Method { WPC, UPC, TPC, FULL };

std::string to_string(Method method);
/// Case-insensitive; throws InvalidInput on unknown names.
Method parse_method(std::string_view text);

/// Normalized importance weights q(u) over supplies and p(v) over demands.
struct ImportanceProfile {
  std::vector<double> q;
  std::vector<double> p;
  double n_q = 1.0;
  double n_p = 1.0;
  double threshold_c = 0.0;

  std::size_t m() const noexcept { return q.size(); }
  std::size_t n() const noexcept { return p.size(); }
  std::size_t n_bar() const noexcept { return m() > n() ? m() : n(); }
};

/// q(u) = max{mean_supply(u), c/m} / n_q and p(v) = max{mean_demand(v), c/n} / n_p,
/// with n_q, n_p the sums of the clamped values.
ImportanceProfile importance_profile(const ProductionSystem& system, double threshold_c);

/// The profile each construction method samples from: TPC is thresholded,
/// WPC uses the raw means (threshold 0), UPC is uniform. FULL has no profile
/// of its own and maps to UPC.
ImportanceProfile profile_for(Method method, const ProductionSystem& system, double threshold_c);

/// c0 * kappa^3 * ln(e*kappa) * ln(4*kappa/epsilon).
double gamma_from_theory(double epsilon, double kappa, double c0);

struct DirectGamma {
  double gamma;
};
struct TheoryGamma {
  double epsilon;
  double kappa;
  double c0 = 1.0;
};

struct ConstructionConfig {
  std::variant<DirectGamma, TheoryGamma> gamma_mode = DirectGamma{10.0};
  double threshold_c = 0.5;
  std::uint64_t seed = 0;

  static constexpr double kTheoryThreshold = 0.2;
  static constexpr double kExperimentThreshold = 0.5;

  double gamma() const;
};

/// min{gamma * n_bar * q(u) * p(v), 1}. Throws std::out_of_range on bad ids.
double edge_probability(const ImportanceProfile& profile, double gamma, std::size_t u,
                        std::size_t v);

/// A bipartite flexibility design. Adjacency lists are sorted and duplicate-free.
class DesignGraph {
 public:
  DesignGraph(std::size_t m, std::size_t n, std::vector<std::vector<std::uint32_t>> adjacency,
              Method method = Method::FULL, double gamma = 0.0, std::uint64_t seed = 0);

  static DesignGraph full(std::size_t m, std::size_t n);
  static DesignGraph empty(std::size_t m, std::size_t n);

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  Method method() const noexcept { return method_; }
  double gamma() const noexcept { return gamma_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const std::uint32_t> neighbors(std::size_t u) const { return adjacency_.at(u); }
  const std::vector<std::vector<std::uint32_t>>& adjacency() const noexcept { return adjacency_; }
  bool has_edge(std::size_t u, std::size_t v) const;
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::vector<std::size_t> supply_degrees() const;
  std::vector<std::size_t> demand_degrees() const;

  /// Copy with (u, v) added; used by monotonicity checks.
  DesignGraph with_edge(std::size_t u, std::size_t v) const;

  bool operator==(const DesignGraph& other) const noexcept {
    return m_ == other.m_ && n_ == other.n_ && adjacency_ == other.adjacency_;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  Method method_;
  double gamma_;
  std::uint64_t seed_;
  std::size_t edge_count_ = 0;
};

/// Includes each pair independently with its edge probability. Every pair
/// consumes exactly one draw in (u, v) row-major order, so equal profiles
/// and seeds give identical edge sets.
DesignGraph sample_design(const ImportanceProfile& profile, double gamma, Method method,
                          std::uint64_t seed);

DesignGraph build_design(const ProductionSystem& system, const ConstructionConfig& config,
                         Method method);

/// Sum of r(u,v) over all pairs; m*n for FULL.
double expected_edge_count(const ProductionSystem& system, const ConstructionConfig& config,
                           Method method);

}  // namespace flexdesign
