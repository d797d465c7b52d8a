#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "flexdesign/construct.hpp"
#include "flexdesign/system.hpp"

namespace flexdesign {

struct FlowResult {
  /// Fulfilled demand Z_G(s, d).
  double value = 0.0;
  double ratio_to_full = 1.0;
  /// Flow on each edge, aligned with DesignGraph::adjacency().
  std::optional<std::vector<std::vector<double>>> edge_flow;
};

struct CutResult {
  double value = 0.0;
  /// Bitmask over U of the minimizing L (bit u set iff u in L).
  std::uint64_t argmin_mask = 0;
  std::vector<std::size_t> argmin_L;
};

/// Residual capacities below this are treated as saturated.
inline constexpr double kFlowTolerance = 1e-12;

/// Exact maximum flow of source -> U (capacity s) -> V along design edges
/// (unbounded) -> sink (capacity d). Throws InvalidInput on size mismatch.
FlowResult max_fulfilled_demand(const DesignGraph& graph, const Scenario& scenario,
                                bool with_assignment = false);

/// min over all L subset of U of s(U \ L) + d(Gamma(L)), by enumeration.
/// Ties go to the smallest bitmask. Throws TooLarge when m > max_m.
CutResult min_cut_bruteforce(const DesignGraph& graph, const Scenario& scenario,
                             std::size_t max_m = 20);

/// min{s(U), d(V)}: fulfilled demand of the complete design.
double full_flex_value(const Scenario& scenario);

/// Z_G / Z_F clamped to [0, 1]; 1 when both are zero.
double fulfillment_ratio(const DesignGraph& graph, const Scenario& scenario);

}  // namespace flexdesign
