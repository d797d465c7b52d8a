#include "flexdesign/audit.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "flexdesign/errors.hpp"
#include "flexdesign/rng.hpp"
#include "subset_walk.hpp"

namespace flexdesign {

namespace {

void require_enumerable(const char* who, std::size_t m, std::size_t cap) {
  if (m > std::min(cap, detail::kMaxEnumerable)) {
    std::ostringstream os;
    os << who << ": m = " << m << " exceeds enumeration cap " << cap;
    throw TooLarge(os.str());
  }
}

void require_matching(const DesignGraph& graph, const Scenario& scenario) {
  if (graph.m() != scenario.supply.size() || graph.n() != scenario.demand.size())
    throw InvalidInput("design and scenario dimensions differ");
}

void require_matching(const DesignGraph& graph, const ImportanceProfile& profile) {
  if (graph.m() != profile.m() || graph.n() != profile.n())
    throw InvalidInput("design and importance profile dimensions differ");
}

// Keeps the smallest gap seen; ties go to the smaller bitmask.
class WorstTracker {
 public:
  void offer(std::uint64_t mask, double lhs, double rhs) {
    ++checked_;
    const double gap = lhs - rhs;
    if (gap < gap_ || (gap == gap_ && mask < mask_)) {
      gap_ = gap;
      mask_ = mask;
      lhs_ = lhs;
      rhs_ = rhs;
    }
  }

  AuditReport report(std::string condition) const {
    AuditReport r;
    r.condition = std::move(condition);
    r.subsets_checked = checked_;
    if (checked_ > 0) {
      r.worst = AuditViolation{detail::mask_to_ids(mask_), lhs_, rhs_, gap_};
      r.pass = gap_ >= 0.0;
    }
    return r;
  }

 private:
  std::size_t checked_ = 0;
  double gap_ = std::numeric_limits<double>::infinity();
  std::uint64_t mask_ = 0;
  double lhs_ = 0.0;
  double rhs_ = 0.0;
};

}  // namespace

void AuditConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("audit epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("audit delta must lie in (0,1)");
  if (!(kappa > 0.0)) throw InvalidInput("audit kappa must be > 0");
  if (!(c_L > 0.0)) throw InvalidInput("audit c_L must be > 0");
  if (!(effective_tau() > 0.0)) throw InvalidInput("audit tau must be > 0");
}

AuditReport cut_condition_audit(const DesignGraph& graph, const Scenario& scenario, double epsilon,
                                std::size_t max_m) {
  require_matching(graph, scenario);
  require_enumerable("cut_condition_audit", graph.m(), max_m);
  const double s_total = scenario.total_supply();
  const double rhs = 1.0 - 2.0 * epsilon;
  detail::NeighborBits nb(graph);
  detail::SubsetWalker walker(nb, {scenario.supply}, {scenario.demand});
  WorstTracker worst;
  walker.run([&](std::uint64_t mask, std::span<const double> s_L, std::span<const double> d_gamma,
                 std::span<const std::uint64_t>) {
    worst.offer(mask, (s_total - s_L[0]) + d_gamma[0], rhs);
  });
  return worst.report("cut");
}

AuditReport either_or_audit(const DesignGraph& graph, const Scenario& scenario,
                            const AuditConfig& config) {
  config.validate();
  require_matching(graph, scenario);
  require_enumerable("either_or_audit", graph.m(), config.max_enumeration_m);
  const double eps = config.epsilon;
  const double d_total = scenario.total_demand();
  detail::NeighborBits nb(graph);
  detail::SubsetWalker walker(nb, {scenario.supply}, {scenario.demand});
  WorstTracker worst;
  walker.run([&](std::uint64_t mask, std::span<const double> s_L, std::span<const double> d_gamma,
                 std::span<const std::uint64_t> gamma) {
    const double lhs5 = d_gamma[0];
    const double rhs5 = s_L[0] - eps;
    if (lhs5 >= rhs5) {
      worst.offer(mask, lhs5, rhs5);
      return;
    }
    // K = V \ Gamma(L); Gamma(K) holds every u with a neighbor outside Gamma(L)
    const double d_K = d_total - d_gamma[0];
    double s_gamma_K = 0.0;
    for (std::size_t u = 0; u < nb.m(); ++u) {
      const auto nu = nb.of(u);
      for (std::size_t i = 0; i < nu.size(); ++i) {
        if (nu[i] & ~gamma[i]) {
          s_gamma_K += scenario.supply[u];
          break;
        }
      }
    }
    const double lhs6 = s_gamma_K;
    const double rhs6 = d_K - eps;
    if (lhs6 - rhs6 > lhs5 - rhs5)
      worst.offer(mask, lhs6, rhs6);
    else
      worst.offer(mask, lhs5, rhs5);
  });
  return worst.report("either_or");
}

AuditReport expansion_audit_demand(const DesignGraph& graph, const ImportanceProfile& profile,
                                   const Scenario& scenario, const AuditConfig& config) {
  config.validate();
  require_matching(graph, scenario);
  require_matching(graph, profile);
  require_enumerable("expansion_audit_demand", graph.m(), config.max_enumeration_m);
  const double floor = config.c_L * config.epsilon / config.kappa;
  const double cap = 1.0 - config.delta;
  const double slope = config.kappa / config.c_L;
  detail::NeighborBits nb(graph);
  detail::SubsetWalker walker(nb, {profile.q}, {scenario.demand});
  WorstTracker worst;
  walker.run([&](std::uint64_t mask, std::span<const double> q_L, std::span<const double> d_gamma,
                 std::span<const std::uint64_t>) {
    if (q_L[0] < floor) return;
    worst.offer(mask, d_gamma[0], std::min(cap, slope * q_L[0]));
  });
  return worst.report("expansion_demand");
}

AuditReport expansion_audit_importance(const DesignGraph& graph, const ImportanceProfile& profile,
                                       const AuditConfig& config) {
  config.validate();
  require_matching(graph, profile);
  require_enumerable("expansion_audit_importance", graph.m(), config.max_enumeration_m);
  const double tau = config.effective_tau();
  detail::NeighborBits nb(graph);
  detail::SubsetWalker walker(nb, {profile.q}, {profile.p});
  WorstTracker worst;
  walker.run([&](std::uint64_t mask, std::span<const double> q_L, std::span<const double> p_gamma,
                 std::span<const std::uint64_t>) {
    if (q_L[0] < tau) return;
    worst.offer(mask, p_gamma[0], 1.0 - tau);
  });
  return worst.report("expansion_importance");
}

NeighborProbability neighbor_probability_check(const ImportanceProfile& profile, double gamma,
                                               const std::vector<std::size_t>& L, std::size_t v,
                                               std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw InvalidInput("neighbor_probability_check needs trials >= 1");
  if (v >= profile.n()) throw std::out_of_range("demand node id out of range");
  double q_L = 0.0;
  for (auto u : L) {
    if (u >= profile.m()) throw std::out_of_range("supply node id out of range");
    q_L += profile.q[u];
  }

  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto design = sample_design(profile, gamma, Method::TPC, derive_seed(seed, t));
    for (auto u : L) {
      if (design.has_edge(u, v)) {
        ++hits;
        break;
      }
    }
  }

  NeighborProbability out;
  out.trials = trials;
  out.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  const double ell = gamma * static_cast<double>(profile.n_bar()) * q_L;
  out.lower_bound = 1.0 - std::exp(-profile.p[v] * ell);
  out.sigma = std::sqrt(out.lower_bound * (1.0 - out.lower_bound) / static_cast<double>(trials));
  out.consistent = out.empirical >= out.lower_bound - 3.0 * out.sigma;
  return out;
}

}  // namespace flexdesign
