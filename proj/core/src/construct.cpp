#include "flexdesign/construct.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "flexdesign/errors.hpp"
#include "flexdesign/rng.hpp"

namespace flexdesign {

namespace {

std::pair<std::vector<double>, double> clamp_and_normalize(std::span<const double> means,
                                                           double floor) {
  std::vector<double> out(means.size());
  double total = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    out[i] = std::max(means[i], floor);
    total += out[i];
  }
  if (!(total > 0.0)) throw InvalidInstance("importance weights sum to zero");
  for (auto& x : out) x /= total;
  return {std::move(out), total};
}

ImportanceProfile make_profile(const ProductionSystem& system, double threshold_c) {
  ImportanceProfile profile;
  profile.threshold_c = threshold_c;
  const double floor_q = threshold_c / static_cast<double>(system.m());
  const double floor_p = threshold_c / static_cast<double>(system.n());
  std::tie(profile.q, profile.n_q) = clamp_and_normalize(system.mean_supply(), floor_q);
  std::tie(profile.p, profile.n_p) = clamp_and_normalize(system.mean_demand(), floor_p);
  return profile;
}

ImportanceProfile uniform_profile(std::size_t m, std::size_t n) {
  ImportanceProfile profile;
  profile.q.assign(m, 1.0 / static_cast<double>(m));
  profile.p.assign(n, 1.0 / static_cast<double>(n));
  return profile;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::WPC: return "WPC";
    case Method::UPC: return "UPC";
    case Method::TPC: return "TPC";
    case Method::FULL: return "FULL";
  }
  return "UNKNOWN";
}

Method parse_method(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto m : {Method::WPC, Method::UPC, Method::TPC, Method::FULL})
    if (upper == to_string(m)) return m;
  throw InvalidInput("unknown construction method '" + std::string(text) + "'");
}

ImportanceProfile importance_profile(const ProductionSystem& system, double threshold_c) {
  if (!(threshold_c > 0.0)) throw InvalidInput("threshold_c must be > 0");
  return make_profile(system, threshold_c);
}

ImportanceProfile profile_for(Method method, const ProductionSystem& system, double threshold_c) {
  switch (method) {
    case Method::TPC: return importance_profile(system, threshold_c);
    case Method::WPC: return make_profile(system, 0.0);
    case Method::UPC:
    case Method::FULL: return uniform_profile(system.m(), system.n());
  }
  throw InvalidInput("unknown construction method");
}

double gamma_from_theory(double epsilon, double kappa, double c0) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0,1)");
  if (!(kappa >= 1.0)) throw InvalidInput("kappa must be >= 1");
  if (!(c0 > 0.0)) throw InvalidInput("c0 must be > 0");
  return c0 * kappa * kappa * kappa * std::log(std::numbers::e * kappa) *
         std::log(4.0 * kappa / epsilon);
}

double ConstructionConfig::gamma() const {
  const double g = std::visit(
      [](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, DirectGamma>)
          return mode.gamma;
        else
          return gamma_from_theory(mode.epsilon, mode.kappa, mode.c0);
      },
      gamma_mode);
  if (!(g > 0.0) || !std::isfinite(g)) throw InvalidInput("gamma must be finite and > 0");
  return g;
}

double edge_probability(const ImportanceProfile& profile, double gamma, std::size_t u,
                        std::size_t v) {
  if (u >= profile.m() || v >= profile.n()) {
    std::ostringstream os;
    os << "edge (" << u << ", " << v << ") outside " << profile.m() << " x " << profile.n();
    throw std::out_of_range(os.str());
  }
  const double r = gamma * static_cast<double>(profile.n_bar()) * profile.q[u] * profile.p[v];
  return std::min(r, 1.0);
}

DesignGraph::DesignGraph(std::size_t m, std::size_t n,
                         std::vector<std::vector<std::uint32_t>> adjacency, Method method,
                         double gamma, std::uint64_t seed)
    : m_(m), n_(n), adjacency_(std::move(adjacency)), method_(method), gamma_(gamma), seed_(seed) {
  if (adjacency_.size() != m_) throw InvalidInput("adjacency must have one list per supply node");
  for (std::size_t u = 0; u < m_; ++u) {
    const auto& row = adjacency_[u];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] >= n_) throw InvalidInput("edge endpoint out of range");
      if (k > 0 && row[k] <= row[k - 1])
        throw InvalidInput("adjacency lists must be sorted and duplicate-free");
    }
    edge_count_ += row.size();
  }
}

DesignGraph DesignGraph::full(std::size_t m, std::size_t n) {
  std::vector<std::vector<std::uint32_t>> adj(m);
  for (auto& row : adj) {
    row.resize(n);
    for (std::size_t v = 0; v < n; ++v) row[v] = static_cast<std::uint32_t>(v);
  }
  return DesignGraph(m, n, std::move(adj), Method::FULL);
}

DesignGraph DesignGraph::empty(std::size_t m, std::size_t n) {
  return DesignGraph(m, n, std::vector<std::vector<std::uint32_t>>(m), Method::FULL);
}

bool DesignGraph::has_edge(std::size_t u, std::size_t v) const {
  const auto& row = adjacency_.at(u);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(v));
}

std::vector<std::size_t> DesignGraph::supply_degrees() const {
  std::vector<std::size_t> deg(m_);
  for (std::size_t u = 0; u < m_; ++u) deg[u] = adjacency_[u].size();
  return deg;
}

std::vector<std::size_t> DesignGraph::demand_degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& row : adjacency_)
    for (auto v : row) ++deg[v];
  return deg;
}

DesignGraph DesignGraph::with_edge(std::size_t u, std::size_t v) const {
  if (u >= m_ || v >= n_) throw std::out_of_range("with_edge: endpoint out of range");
  auto adj = adjacency_;
  auto& row = adj[u];
  auto it = std::lower_bound(row.begin(), row.end(), static_cast<std::uint32_t>(v));
  if (it == row.end() || *it != v) row.insert(it, static_cast<std::uint32_t>(v));
  return DesignGraph(m_, n_, std::move(adj), method_, gamma_, seed_);
}

DesignGraph sample_design(const ImportanceProfile& profile, double gamma, Method method,
                          std::uint64_t seed) {
  const std::size_t m = profile.m();
  const std::size_t n = profile.n();
  if (method == Method::FULL) {
    auto full = DesignGraph::full(m, n);
    return DesignGraph(m, n, full.adjacency(), Method::FULL, gamma, seed);
  }
  const double scale = gamma * static_cast<double>(profile.n_bar());
  CounterRng rng(seed);
  std::vector<std::vector<std::uint32_t>> adj(m);
  for (std::size_t u = 0; u < m; ++u) {
    const double row_scale = scale * profile.q[u];
    for (std::size_t v = 0; v < n; ++v) {
      const double r = std::min(row_scale * profile.p[v], 1.0);
      if (rng.uniform() < r) adj[u].push_back(static_cast<std::uint32_t>(v));
    }
  }
  return DesignGraph(m, n, std::move(adj), method, gamma, seed);
}

DesignGraph build_design(const ProductionSystem& system, const ConstructionConfig& config,
                         Method method) {
  const double gamma = config.gamma();
  return sample_design(profile_for(method, system, config.threshold_c), gamma, method,
                       config.seed);
}

double expected_edge_count(const ProductionSystem& system, const ConstructionConfig& config,
                           Method method) {
  if (method == Method::FULL) return static_cast<double>(system.m() * system.n());
  const double gamma = config.gamma();
  const auto profile = profile_for(method, system, config.threshold_c);
  double total = 0.0;
  for (std::size_t u = 0; u < profile.m(); ++u)
    for (std::size_t v = 0; v < profile.n(); ++v) total += edge_probability(profile, gamma, u, v);
  return total;
}

}  // namespace flexdesign
