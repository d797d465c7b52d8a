#include "flexdesign/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "flexdesign/errors.hpp"
#include "flexdesign/rng.hpp"

namespace flexdesign {

namespace {

constexpr double kMeanTol = 1e-12;

double sum(std::span<const double> xs) { return std::accumulate(xs.begin(), xs.end(), 0.0); }

struct MultinomialGroup {
  std::vector<std::size_t> nodes;
  double total = 0.0;
  double weight = 0.0;
  std::uint32_t units = 0;
};

MultinomialGroup collect_group(std::span<const DistributionSpec> dists) {
  MultinomialGroup g;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (dists[i].kind != DistributionKind::multinomial_allocated) continue;
    g.nodes.push_back(i);
    g.weight += dists[i].weight;
  }
  if (!g.nodes.empty()) {
    g.total = dists[g.nodes.front()].total;
    g.units = dists[g.nodes.front()].units;
  }
  return g;
}

void validate_side(const char* side, std::span<const double> means,
                   std::span<const DistributionSpec> dists) {
  auto fail = [&](std::size_t i, const std::string& why) {
    std::ostringstream os;
    os << side << " node " << i << ": " << why;
    throw InvalidInstance(os.str());
  };
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (!std::isfinite(means[i]) || means[i] < 0.0) fail(i, "mean must be finite and >= 0");
    const auto& d = dists[i];
    switch (d.kind) {
      case DistributionKind::deterministic:
      case DistributionKind::two_point:
        break;
      case DistributionKind::scaled_two_point:
        if (!(d.prob > 0.0 && d.prob < 1.0)) fail(i, "scaled_two_point prob must lie in (0,1)");
        if (!(d.factor >= 1.0) || d.prob * d.factor > 1.0 + kMeanTol)
          fail(i, "scaled_two_point needs factor >= 1 and prob*factor <= 1");
        break;
      case DistributionKind::multinomial_allocated:
        if (d.units == 0) fail(i, "multinomial_allocated needs units >= 1");
        if (!(d.total >= 0.0) || !(d.weight >= 0.0))
          fail(i, "multinomial_allocated total and weight must be >= 0");
        break;
    }
  }
  const auto group = collect_group(dists);
  if (group.nodes.empty()) return;
  if (group.total > 0.0 && !(group.weight > 0.0))
    fail(group.nodes.front(), "multinomial_allocated group has zero total weight");
  for (auto i : group.nodes) {
    if (dists[i].total != group.total || dists[i].units != group.units)
      fail(i, "multinomial_allocated nodes on one side must share total and units");
    const double implied = group.weight > 0.0 ? group.total * dists[i].weight / group.weight : 0.0;
    if (std::abs(implied - means[i]) > kMeanTol * std::max(1.0, group.total))
      fail(i, "multinomial_allocated mean differs from total*weight/sum(weights)");
  }
}

std::vector<double> sample_side(std::span<const double> means,
                                std::span<const DistributionSpec> dists, CounterRng& rng) {
  std::vector<double> out(means.size(), 0.0);
  for (std::size_t i = 0; i < means.size(); ++i) {
    const auto& d = dists[i];
    switch (d.kind) {
      case DistributionKind::deterministic:
        out[i] = means[i];
        break;
      case DistributionKind::two_point:
        out[i] = rng.uniform() < 0.5 ? 0.0 : 2.0 * means[i];
        break;
      case DistributionKind::scaled_two_point: {
        const double low = (1.0 - d.prob * d.factor) / (1.0 - d.prob) * means[i];
        out[i] = rng.uniform() < d.prob ? d.factor * means[i] : std::max(0.0, low);
        break;
      }
      case DistributionKind::multinomial_allocated:
        break;
    }
  }

  const auto group = collect_group(dists);
  if (group.nodes.empty() || !(group.weight > 0.0)) return out;
  std::vector<double> cumulative;
  cumulative.reserve(group.nodes.size());
  double acc = 0.0;
  for (auto i : group.nodes) cumulative.push_back(acc += dists[i].weight);
  std::vector<std::uint32_t> counts(group.nodes.size(), 0);
  for (std::uint32_t k = 0; k < group.units; ++k) {
    const double x = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    auto slot = static_cast<std::size_t>(it - cumulative.begin());
    // zero-weight nodes occupy empty intervals and are never selected
    counts[std::min(slot, counts.size() - 1)]++;
  }
  const double unit = group.total / static_cast<double>(group.units);
  for (std::size_t j = 0; j < group.nodes.size(); ++j)
    out[group.nodes[j]] = static_cast<double>(counts[j]) * unit;
  return out;
}

void check_side(std::span<const double> means, std::span<const DistributionSpec> dists,
                double kappa, double bound, AssumptionViolation::Side side,
                AssumptionReport& report) {
  const auto group = collect_group(dists);
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double ratio = means[i] > 0.0 ? dists[i].support_ratio(group.weight) : 1.0;
    if (ratio > kappa * (1.0 + kMeanTol)) {
      report.kappa_ok = false;
      std::ostringstream os;
      os << "support reaches " << ratio << " x mean, above kappa = " << kappa;
      report.violations.push_back({side, i, os.str()});
    }
    if (means[i] > bound) {
      report.mean_bound_ok = false;
      std::ostringstream os;
      os << "mean " << means[i] << " exceeds bound " << bound;
      report.violations.push_back({side, i, os.str()});
    }
  }
}

}  // namespace

std::string to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::deterministic: return "deterministic";
    case DistributionKind::two_point: return "two_point";
    case DistributionKind::scaled_two_point: return "scaled_two_point";
    case DistributionKind::multinomial_allocated: return "multinomial_allocated";
  }
  return "unknown";
}

DistributionKind parse_distribution_kind(const std::string& text) {
  for (auto k : {DistributionKind::deterministic, DistributionKind::two_point,
                 DistributionKind::scaled_two_point, DistributionKind::multinomial_allocated})
    if (text == to_string(k)) return k;
  throw InvalidInstance("unknown distribution kind '" + text + "'");
}

double DistributionSpec::support_ratio(double group_weight) const {
  switch (kind) {
    case DistributionKind::deterministic: return 1.0;
    case DistributionKind::two_point: return 2.0;
    case DistributionKind::scaled_two_point: return factor;
    case DistributionKind::multinomial_allocated:
      return weight > 0.0 ? group_weight / weight : 1.0;
  }
  return 1.0;
}

ProductionSystem::ProductionSystem(std::vector<double> mean_supply,
                                   std::vector<double> mean_demand,
                                   std::vector<DistributionSpec> supply_dist,
                                   std::vector<DistributionSpec> demand_dist, double kappa)
    : mean_supply_(std::move(mean_supply)),
      mean_demand_(std::move(mean_demand)),
      supply_dist_(std::move(supply_dist)),
      demand_dist_(std::move(demand_dist)),
      kappa_(kappa) {
  if (mean_supply_.empty() || mean_demand_.empty())
    throw InvalidInstance("a production system needs m >= 1 and n >= 1");
  if (supply_dist_.size() != mean_supply_.size() || demand_dist_.size() != mean_demand_.size())
    throw InvalidInstance("one distribution spec per node is required");
  if (!std::isfinite(kappa_) || !(kappa_ > 0.0))
    throw InvalidInstance("kappa must be finite and positive");
  validate_side("supply", mean_supply_, supply_dist_);
  validate_side("demand", mean_demand_, demand_dist_);
}

double ProductionSystem::total_mean_supply() const noexcept { return sum(mean_supply_); }
double ProductionSystem::total_mean_demand() const noexcept { return sum(mean_demand_); }

bool ProductionSystem::is_normalized(double tol) const noexcept {
  return std::abs(total_mean_supply() - 1.0) <= tol && std::abs(total_mean_demand() - 1.0) <= tol;
}

double Scenario::total_supply() const noexcept { return sum(supply); }
double Scenario::total_demand() const noexcept { return sum(demand); }

ProductionSystem normalize(const ProductionSystem& system) {
  const double ts = system.total_mean_supply();
  const double td = system.total_mean_demand();
  if (!(ts > 0.0) || !(td > 0.0))
    throw InvalidInstance("cannot normalize: total mean supply and demand must be positive");

  auto rescale = [](std::span<const double> means, std::span<const DistributionSpec> dists,
                    double total) {
    std::vector<double> out(means.size());
    std::transform(means.begin(), means.end(), out.begin(), [&](double x) { return x / total; });
    std::vector<DistributionSpec> specs(dists.begin(), dists.end());
    for (auto& d : specs)
      if (d.kind == DistributionKind::multinomial_allocated) d.total /= total;
    return std::pair{std::move(out), std::move(specs)};
  };
  auto [s, sd] = rescale(system.mean_supply(), system.supply_dist(), ts);
  auto [d, dd] = rescale(system.mean_demand(), system.demand_dist(), td);
  return ProductionSystem(std::move(s), std::move(d), std::move(sd), std::move(dd),
                          system.kappa());
}

Scenario sample_scenario(const ProductionSystem& system, std::uint64_t seed) {
  CounterRng supply_rng(derive_seed(seed, 0));
  CounterRng demand_rng(derive_seed(seed, 1));
  Scenario sc;
  sc.supply = sample_side(system.mean_supply(), system.supply_dist(), supply_rng);
  sc.demand = sample_side(system.mean_demand(), system.demand_dist(), demand_rng);
  sc.seed = seed;
  return sc;
}

AssumptionReport check_assumptions(const ProductionSystem& system, double epsilon, double c) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0,1)");
  if (!(c > 0.0 && c < 1.0)) throw InvalidInput("c must lie in (0,1)");

  AssumptionReport report;
  const double kappa = system.kappa();
  const double kappa3 = kappa * kappa * kappa;
  const double log_n = std::log(static_cast<double>(system.n_bar()));

  report.mean_bound = log_n > 0.0 ? c * epsilon * epsilon / (kappa3 * log_n)
                                  : std::numeric_limits<double>::infinity();
  report.max_mean_supply = *std::max_element(system.mean_supply().begin(), system.mean_supply().end());
  report.max_mean_demand = *std::max_element(system.mean_demand().begin(), system.mean_demand().end());

  if (kappa < 1.0) {
    report.kappa_ok = false;
    report.violations.push_back(
        {AssumptionViolation::Side::system, std::nullopt, "kappa must be >= 1"});
  }
  check_side(system.mean_supply(), system.supply_dist(), kappa, report.mean_bound,
             AssumptionViolation::Side::supply, report);
  check_side(system.mean_demand(), system.demand_dist(), kappa, report.mean_bound,
             AssumptionViolation::Side::demand, report);

  if (log_n > 0.0) {
    const double lhs = static_cast<double>(std::min(system.m(), system.n())) / log_n;
    const double rhs = kappa3 / (c * epsilon * epsilon);
    if (lhs < rhs) {
      report.balance_ok = false;
      std::ostringstream os;
      os << "min(n,m)/ln(n_bar) = " << lhs << " is below kappa^3/(c eps^2) = " << rhs;
      report.violations.push_back({AssumptionViolation::Side::system, std::nullopt, os.str()});
    }
  }
  return report;
}

ProductionSystem make_instance_from_means(std::vector<double> raw_supply,
                                          std::vector<double> raw_demand) {
  std::vector<DistributionSpec> sd(raw_supply.size(), DistributionSpec::deterministic());
  std::vector<DistributionSpec> dd(raw_demand.size(), DistributionSpec::two_point());
  return normalize(ProductionSystem(std::move(raw_supply), std::move(raw_demand), std::move(sd),
                                    std::move(dd), 2.0));
}

ProductionSystem make_two_level_instance(std::size_t n, double alpha) {
  if (n == 0 || n % 2 != 0) throw InvalidInstance("two-level instance needs an even n >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInstance("alpha must lie in (0,1)");
  const double nd = static_cast<double>(n);
  std::vector<double> supply(n);
  for (std::size_t u = 0; u < n; ++u) supply[u] = (u < n / 2 ? 2.0 - alpha : alpha) / nd;
  std::vector<double> demand(n, 1.0 / nd);
  // built directly: the levels are already normalized and must stay exact
  return ProductionSystem(std::move(supply), std::move(demand),
                          std::vector<DistributionSpec>(n, DistributionSpec::deterministic()),
                          std::vector<DistributionSpec>(n, DistributionSpec::two_point()), 2.0);
}

ProductionSystem make_pareto_instance(std::size_t m, std::size_t n, double beta, double cap,
                                      std::uint64_t seed) {
  if (!(beta > 0.0)) throw InvalidInstance("pareto shape beta must be > 0");
  if (!(cap > 1.0)) throw InvalidInstance("pareto truncation cap must be > 1");
  if (m == 0 || n == 0) throw InvalidInstance("a production system needs m >= 1 and n >= 1");
  auto draw_side = [&](std::size_t count, std::uint64_t stream) {
    CounterRng rng(derive_seed(seed, stream));
    std::vector<double> out(count);
    // inverse CDF of Pareto(scale 1, shape beta); 1 - U lies in (0, 1]
    for (auto& x : out) x = std::min(std::pow(1.0 - rng.uniform(), -1.0 / beta), cap);
    return out;
  };
  return make_instance_from_means(draw_side(m, 0), draw_side(n, 1));
}

ProductionSystem make_uniform_instance(std::size_t m, std::size_t n,
                                       const std::function<double()>& draw) {
  if (m == 0 || n == 0) throw InvalidInstance("a production system needs m >= 1 and n >= 1");
  auto draw_side = [&](std::size_t count) {
    std::vector<double> out(count);
    for (auto& x : out) {
      do x = draw();
      while (x == 0.0);
    }
    return out;
  };
  auto supply = draw_side(m);
  auto demand = draw_side(n);
  return make_instance_from_means(std::move(supply), std::move(demand));
}

ProductionSystem make_uniform_instance(std::size_t m, std::size_t n, std::uint64_t seed) {
  CounterRng rng(derive_seed(seed, 2));
  return make_uniform_instance(m, n, [&rng] { return rng.uniform(); });
}

}  // namespace flexdesign
