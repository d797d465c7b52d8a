#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flexdesign/construct.hpp"
#include "flexdesign/system.hpp"

namespace flexdesign {

struct TwoLevelFamily {
  std::size_t n = 100;
  double alpha = 0.1;
};
struct ParetoFamily {
  std::size_t m = 100;
  std::size_t n = 100;
  double beta = 0.5;
  double cap = 50.0;
  std::uint64_t seed = 0;
};
struct UniformFamily {
  std::size_t m = 100;
  std::size_t n = 100;
  std::uint64_t seed = 0;
};
struct FixedInstance {
  ProductionSystem system;
};

using InstanceSource = std::variant<TwoLevelFamily, ParetoFamily, UniformFamily, FixedInstance>;

ProductionSystem materialize(const InstanceSource& source);

struct ExperimentPlan {
  InstanceSource source = TwoLevelFamily{};
  std::vector<Method> methods{Method::TPC, Method::WPC};
  std::vector<double> gamma_grid{5, 10, 15, 20, 25, 30};
  std::size_t n_graphs = 20;
  std::size_t n_scenarios = 200;
  double epsilon = 0.01;
  std::uint64_t master_seed = 0;
  double threshold_c = ConstructionConfig::kExperimentThreshold;

  /// Throws InvalidInput on empty grids or zero counts.
  void validate() const;

  /// Ratio-vs-gamma curves at CI scale (20 graphs x 200 scenarios).
  static ExperimentPlan desk_scale(InstanceSource source, std::uint64_t master_seed = 1);
  /// The full 100 graphs x 1000 scenarios protocol.
  static ExperimentPlan full_scale(InstanceSource source, std::uint64_t master_seed = 1);
};

struct ExperimentRow {
  Method method = Method::TPC;
  double gamma = 0.0;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;
  double mean_edges = 0.0;
  /// Fraction of samples with Z_G >= (1 - eps) Z_F.
  double optimality_freq = 0.0;
  std::size_t n_samples = 0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;

  const ExperimentRow* find(Method method, double gamma) const;
};

struct RunOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  std::size_t jobs = 0;
};

/// Seeds: scenario k uses derive_seed(master, 1, k); graph g at grid point i
/// uses derive_seed(master, 2, i, g). Both are independent of the method, so
/// every method sees the same scenarios and the result does not depend on jobs.
std::uint64_t scenario_seed(std::uint64_t master_seed, std::size_t index);
std::uint64_t graph_seed(std::uint64_t master_seed, std::size_t gamma_index, std::size_t graph_index);

ExperimentTable run_ratio_experiment(const ExperimentPlan& plan, RunOptions options = {});

struct OptimalityRow {
  Method method = Method::TPC;
  double gamma = 0.0;
  /// Pooled estimate of Pr[Z_G >= 1 - eps] over graphs and scenarios.
  double pooled_freq = 0.0;
  std::vector<double> per_graph_freq;
  std::size_t n_samples = 0;
};

/// Absolute criterion Z_G >= 1 - eps, per graph and pooled.
std::vector<OptimalityRow> run_optimality_experiment(const ExperimentPlan& plan,
                                                     RunOptions options = {});

struct IsolationResult {
  /// Fraction of designs with more than n/4 isolated nodes in the small half U2.
  double freq_many_isolated = 0.0;
  double mean_isolated_U2 = 0.0;
  double mean_U2_edges = 0.0;
  /// gamma * alpha * n / 2 before clamping.
  double expected_U2_edges = 0.0;
  std::size_t n_graphs = 0;
};

/// WPC designs on the two-level family.
IsolationResult run_isolation_experiment(std::size_t n, double alpha, double gamma,
                                         std::size_t n_graphs, std::uint64_t seed);

enum class TableFormat { csv, json };
TableFormat parse_table_format(const std::string& text);

inline constexpr const char* kCsvHeader =
    "method,gamma,mean_ratio,std_ratio,mean_edges,optimality_freq,n_samples";

std::string format_table(const ExperimentTable& table, TableFormat format);
/// Throws IoError naming the path on failure.
void emit_results(const ExperimentTable& table, const std::filesystem::path& path,
                  TableFormat format);
ExperimentTable parse_results_csv(const std::string& text);

/// Per-node degrees, degree histograms and the share of edges incident to
/// each supply class. `supply_class` labels each supply node (e.g. "U1",
/// "U2"); when absent no shares are reported.
struct DesignSnapshot {
  std::vector<std::size_t> supply_degree;
  std::vector<std::size_t> demand_degree;
  std::map<std::size_t, std::size_t> supply_degree_histogram;
  std::map<std::size_t, std::size_t> demand_degree_histogram;
  std::map<std::string, double> class_edge_share;
};

DesignSnapshot design_snapshot(const DesignGraph& graph,
                               const std::optional<std::vector<std::string>>& supply_class = {});

/// First half "U1", second half "U2".
std::vector<std::string> two_level_classes(std::size_t m);

/// The snapshot JSON: the design plus the DesignSnapshot fields.
std::string design_snapshot_to_json(const DesignGraph& graph,
                                    const std::optional<std::vector<std::string>>& supply_class = {});
void emit_design_snapshot(const DesignGraph& graph, const std::filesystem::path& path,
                          const std::optional<std::vector<std::string>>& supply_class = {});

}  // namespace flexdesign
