#include "flexdesign/flow.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "flexdesign/errors.hpp"
#include "subset_walk.hpp"

namespace flexdesign {

namespace {

// Dinic's algorithm on real capacities. Arcs are stored in pairs so that
// arc ^ 1 is the reverse arc.
class Dinic {
 public:
  explicit Dinic(std::size_t nodes) : first_(nodes + 1, 0), level_(nodes), cursor_(nodes) {}

  std::size_t add_arc(std::size_t from, std::size_t to, double cap) {
    pending_.push_back({static_cast<std::uint32_t>(from), static_cast<std::uint32_t>(to), cap});
    return pending_.size() - 1;
  }

  void finalize() {
    const std::size_t nodes = level_.size();
    std::vector<std::uint32_t> out_degree(nodes, 0);
    for (const auto& a : pending_) {
      ++out_degree[a.from];
      ++out_degree[a.to];
    }
    for (std::size_t i = 0; i < nodes; ++i) first_[i + 1] = first_[i] + out_degree[i];
    to_.resize(2 * pending_.size());
    cap_.resize(2 * pending_.size());
    pair_.resize(2 * pending_.size());
    slot_of_.resize(pending_.size());
    std::vector<std::uint32_t> fill(first_.begin(), first_.end() - 1);
    for (std::size_t k = 0; k < pending_.size(); ++k) {
      const auto& a = pending_[k];
      const std::uint32_t fwd = fill[a.from]++;
      const std::uint32_t rev = fill[a.to]++;
      to_[fwd] = a.to;
      cap_[fwd] = a.cap;
      to_[rev] = a.from;
      cap_[rev] = 0.0;
      pair_[fwd] = rev;
      pair_[rev] = fwd;
      slot_of_[k] = fwd;
    }
  }

  double run(std::size_t source, std::size_t sink) {
    double total = 0.0;
    while (bfs(source, sink)) {
      std::copy(first_.begin(), first_.end() - 1, cursor_.begin());
      for (;;) {
        const double pushed = dfs(source, sink, std::numeric_limits<double>::infinity());
        if (pushed <= kFlowTolerance) break;
        total += pushed;
      }
    }
    return total;
  }

  double residual(std::size_t arc) const { return cap_[slot_of_[arc]]; }

 private:
  struct Pending {
    std::uint32_t from, to;
    double cap;
  };

  bool bfs(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    queue_.clear();
    level_[source] = 0;
    queue_.push_back(static_cast<std::uint32_t>(source));
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const auto x = queue_[head];
      for (auto e = first_[x]; e < first_[x + 1]; ++e) {
        if (cap_[e] > kFlowTolerance && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[x] + 1;
          queue_.push_back(to_[e]);
        }
      }
    }
    return level_[sink] >= 0;
  }

  double dfs(std::size_t x, std::size_t sink, double limit) {
    if (x == sink) return limit;
    for (auto& e = cursor_[x]; e < first_[x + 1]; ++e) {
      const auto y = to_[e];
      if (cap_[e] <= kFlowTolerance || level_[y] != level_[x] + 1) continue;
      const double pushed = dfs(y, sink, std::min(limit, cap_[e]));
      if (pushed > kFlowTolerance) {
        cap_[e] -= pushed;
        cap_[pair_[e]] += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<Pending> pending_;
  std::vector<std::uint32_t> first_;
  std::vector<std::uint32_t> to_;
  std::vector<double> cap_;
  std::vector<std::uint32_t> pair_;
  std::vector<std::uint32_t> slot_of_;
  std::vector<int> level_;
  std::vector<std::uint32_t> cursor_;
  std::vector<std::uint32_t> queue_;
};

void check_dimensions(const DesignGraph& graph, const Scenario& scenario) {
  if (graph.m() != scenario.supply.size() || graph.n() != scenario.demand.size()) {
    std::ostringstream os;
    os << "design is " << graph.m() << " x " << graph.n() << " but scenario is "
       << scenario.supply.size() << " x " << scenario.demand.size();
    throw InvalidInput(os.str());
  }
}

}  // namespace

FlowResult max_fulfilled_demand(const DesignGraph& graph, const Scenario& scenario,
                                bool with_assignment) {
  check_dimensions(graph, scenario);
  const std::size_t m = graph.m();
  const std::size_t n = graph.n();
  const double s_total = scenario.total_supply();
  const double d_total = scenario.total_demand();
  const double unbounded = s_total + d_total + 1.0;

  const std::size_t source = 0;
  const std::size_t sink = m + n + 1;
  Dinic net(m + n + 2);
  std::vector<std::size_t> supply_arc(m);
  for (std::size_t u = 0; u < m; ++u) supply_arc[u] = net.add_arc(source, 1 + u, scenario.supply[u]);
  std::vector<std::vector<std::size_t>> edge_arc(m);
  for (std::size_t u = 0; u < m; ++u) {
    for (auto v : graph.neighbors(u)) edge_arc[u].push_back(net.add_arc(1 + u, 1 + m + v, unbounded));
  }
  for (std::size_t v = 0; v < n; ++v) net.add_arc(1 + m + v, sink, scenario.demand[v]);
  net.finalize();
  net.run(source, sink);

  FlowResult result;
  // value read off the source arcs rather than summed pushes
  double value = 0.0;
  for (std::size_t u = 0; u < m; ++u)
    value += std::max(0.0, scenario.supply[u] - net.residual(supply_arc[u]));
  result.value = std::clamp(value, 0.0, std::min(s_total, d_total));
  const double full = std::min(s_total, d_total);
  result.ratio_to_full = full > 0.0 ? std::clamp(result.value / full, 0.0, 1.0) : 1.0;

  if (with_assignment) {
    std::vector<std::vector<double>> flows(m);
    for (std::size_t u = 0; u < m; ++u) {
      flows[u].reserve(edge_arc[u].size());
      for (auto arc : edge_arc[u]) flows[u].push_back(std::max(0.0, unbounded - net.residual(arc)));
    }
    result.edge_flow = std::move(flows);
  }
  return result;
}

CutResult min_cut_bruteforce(const DesignGraph& graph, const Scenario& scenario,
                             std::size_t max_m) {
  check_dimensions(graph, scenario);
  if (graph.m() > std::min(max_m, detail::kMaxEnumerable)) {
    std::ostringstream os;
    os << "min_cut_bruteforce: m = " << graph.m() << " exceeds cap " << max_m;
    throw TooLarge(os.str());
  }
  const double s_total = scenario.total_supply();
  detail::NeighborBits nb(graph);
  detail::SubsetWalker walker(nb, {scenario.supply}, {scenario.demand});

  CutResult best;
  best.value = std::numeric_limits<double>::infinity();
  walker.run([&](std::uint64_t mask, std::span<const double> s_L, std::span<const double> d_gamma,
                 std::span<const std::uint64_t>) {
    const double value = (s_total - s_L[0]) + d_gamma[0];
    if (value < best.value || (value == best.value && mask < best.argmin_mask)) {
      best.value = value;
      best.argmin_mask = mask;
    }
  });
  best.argmin_L = detail::mask_to_ids(best.argmin_mask);
  return best;
}

double full_flex_value(const Scenario& scenario) {
  return std::min(scenario.total_supply(), scenario.total_demand());
}

double fulfillment_ratio(const DesignGraph& graph, const Scenario& scenario) {
  return max_fulfilled_demand(graph, scenario).ratio_to_full;
}

}  // namespace flexdesign
