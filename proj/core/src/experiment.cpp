#include "flexdesign/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "flexdesign/errors.hpp"
#include "flexdesign/flow.hpp"
#include "flexdesign/rng.hpp"
#include "json_support.hpp"

namespace flexdesign {

namespace {

// Runs body(i) for i in [0, count) on `jobs` threads. The first exception
// thrown by any task is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t count, std::size_t jobs, Body&& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Running mean and sum of squared deviations; merges are order-sensitive
// only in rounding, and we always merge in task-index order.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / total;
    count += other.count;
  }

  double stddev() const {
    return count > 1 ? std::sqrt(std::max(0.0, m2 / static_cast<double>(count - 1))) : 0.0;
  }
};

struct GraphOutcome {
  Moments ratio;
  std::size_t edges = 0;
  std::size_t relative_hits = 0;  // Z_G >= (1 - eps) Z_F
  std::size_t absolute_hits = 0;  // Z_G >= 1 - eps
};

struct SharedInputs {
  ProductionSystem system;
  std::vector<Scenario> scenarios;
  std::vector<double> full_values;
};

SharedInputs prepare(const ExperimentPlan& plan) {
  plan.validate();
  SharedInputs in{materialize(plan.source), {}, {}};
  in.scenarios.reserve(plan.n_scenarios);
  for (std::size_t k = 0; k < plan.n_scenarios; ++k) {
    in.scenarios.push_back(sample_scenario(in.system, scenario_seed(plan.master_seed, k)));
    in.full_values.push_back(full_flex_value(in.scenarios.back()));
  }
  return in;
}

// One outcome per (method, gamma index, graph index), laid out method-major.
std::vector<GraphOutcome> evaluate_all(const ExperimentPlan& plan, const SharedInputs& in,
                                       RunOptions options) {
  const std::size_t per_method = plan.gamma_grid.size() * plan.n_graphs;
  const std::size_t tasks = plan.methods.size() * per_method;
  std::vector<ImportanceProfile> profiles;
  for (auto method : plan.methods) profiles.push_back(profile_for(method, in.system, plan.threshold_c));

  std::vector<GraphOutcome> outcomes(tasks);
  parallel_for(tasks, options.jobs, [&](std::size_t task) {
    const std::size_t mi = task / per_method;
    const std::size_t gi = (task % per_method) / plan.n_graphs;
    const std::size_t g = task % plan.n_graphs;
    const Method method = plan.methods[mi];
    const double gamma = plan.gamma_grid[gi];
    GraphOutcome out;

    if (method == Method::FULL) {
      out.edges = in.system.m() * in.system.n();
      for (double full : in.full_values) {
        out.ratio.add(1.0);
        ++out.relative_hits;
        if (full >= 1.0 - plan.epsilon) ++out.absolute_hits;
      }
    } else {
      const auto design =
          sample_design(profiles[mi], gamma, method, graph_seed(plan.master_seed, gi, g));
      out.edges = design.edge_count();
      for (std::size_t k = 0; k < in.scenarios.size(); ++k) {
        const auto flow = max_fulfilled_demand(design, in.scenarios[k]);
        out.ratio.add(flow.ratio_to_full);
        if (flow.ratio_to_full >= 1.0 - plan.epsilon) ++out.relative_hits;
        if (flow.value >= 1.0 - plan.epsilon) ++out.absolute_hits;
      }
    }
    outcomes[task] = out;
  });
  return outcomes;
}

}  // namespace

ProductionSystem materialize(const InstanceSource& source) {
  return std::visit(
      [](const auto& s) -> ProductionSystem {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoLevelFamily>)
          return make_two_level_instance(s.n, s.alpha);
        else if constexpr (std::is_same_v<T, ParetoFamily>)
          return make_pareto_instance(s.m, s.n, s.beta, s.cap, s.seed);
        else if constexpr (std::is_same_v<T, UniformFamily>)
          return make_uniform_instance(s.m, s.n, s.seed);
        else
          return s.system.is_normalized() ? s.system : normalize(s.system);
      },
      source);
}

void ExperimentPlan::validate() const {
  if (methods.empty()) throw InvalidInput("experiment plan needs at least one method");
  if (gamma_grid.empty()) throw InvalidInput("experiment plan needs a non-empty gamma grid");
  for (double g : gamma_grid)
    if (!(g > 0.0) || !std::isfinite(g)) throw InvalidInput("gamma values must be finite and > 0");
  if (n_graphs == 0 || n_scenarios == 0)
    throw InvalidInput("experiment plan needs n_graphs >= 1 and n_scenarios >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0,1)");
  if (!(threshold_c > 0.0)) throw InvalidInput("threshold_c must be > 0");
}

ExperimentPlan ExperimentPlan::desk_scale(InstanceSource source, std::uint64_t master_seed) {
  ExperimentPlan plan;
  plan.source = std::move(source);
  plan.master_seed = master_seed;
  return plan;
}

ExperimentPlan ExperimentPlan::full_scale(InstanceSource source, std::uint64_t master_seed) {
  auto plan = desk_scale(std::move(source), master_seed);
  plan.n_graphs = 100;
  plan.n_scenarios = 1000;
  return plan;
}

const ExperimentRow* ExperimentTable::find(Method method, double gamma) const {
  for (const auto& r : rows)
    if (r.method == method && r.gamma == gamma) return &r;
  return nullptr;
}

std::uint64_t scenario_seed(std::uint64_t master_seed, std::size_t index) {
  return derive_seed(master_seed, 1, index);
}

std::uint64_t graph_seed(std::uint64_t master_seed, std::size_t gamma_index,
                         std::size_t graph_index) {
  return derive_seed(master_seed, 2, gamma_index, graph_index);
}

ExperimentTable run_ratio_experiment(const ExperimentPlan& plan, RunOptions options) {
  const auto in = prepare(plan);
  const auto outcomes = evaluate_all(plan, in, options);
  ExperimentTable table;
  std::size_t task = 0;
  for (auto method : plan.methods) {
    for (double gamma : plan.gamma_grid) {
      Moments ratio;
      double edges = 0.0;
      std::size_t hits = 0;
      for (std::size_t g = 0; g < plan.n_graphs; ++g, ++task) {
        ratio.merge(outcomes[task].ratio);
        edges += static_cast<double>(outcomes[task].edges);
        hits += outcomes[task].relative_hits;
      }
      ExperimentRow row;
      row.method = method;
      row.gamma = gamma;
      row.mean_ratio = std::clamp(ratio.mean, 0.0, 1.0);
      row.std_ratio = ratio.stddev();
      row.mean_edges = edges / static_cast<double>(plan.n_graphs);
      row.n_samples = ratio.count;
      row.optimality_freq = static_cast<double>(hits) / static_cast<double>(ratio.count);
      table.rows.push_back(row);
    }
  }
  return table;
}

std::vector<OptimalityRow> run_optimality_experiment(const ExperimentPlan& plan,
                                                     RunOptions options) {
  const auto in = prepare(plan);
  const auto outcomes = evaluate_all(plan, in, options);
  std::vector<OptimalityRow> rows;
  std::size_t task = 0;
  const double per_graph = static_cast<double>(plan.n_scenarios);
  for (auto method : plan.methods) {
    for (double gamma : plan.gamma_grid) {
      OptimalityRow row;
      row.method = method;
      row.gamma = gamma;
      std::size_t hits = 0;
      for (std::size_t g = 0; g < plan.n_graphs; ++g, ++task) {
        hits += outcomes[task].absolute_hits;
        row.per_graph_freq.push_back(static_cast<double>(outcomes[task].absolute_hits) / per_graph);
      }
      row.n_samples = plan.n_graphs * plan.n_scenarios;
      row.pooled_freq = static_cast<double>(hits) / static_cast<double>(row.n_samples);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

IsolationResult run_isolation_experiment(std::size_t n, double alpha, double gamma,
                                         std::size_t n_graphs, std::uint64_t seed) {
  if (n_graphs == 0) throw InvalidInput("isolation experiment needs n_graphs >= 1");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
  const auto system = make_two_level_instance(n, alpha);
  const auto profile = profile_for(Method::WPC, system, 0.0);
  const std::size_t half = n / 2;

  IsolationResult result;
  result.n_graphs = n_graphs;
  result.expected_U2_edges = gamma * alpha * static_cast<double>(n) / 2.0;
  std::size_t many = 0;
  double isolated_total = 0.0;
  double edges_total = 0.0;
  for (std::size_t g = 0; g < n_graphs; ++g) {
    const auto design = sample_design(profile, gamma, Method::WPC, derive_seed(seed, g));
    std::size_t isolated = 0;
    for (std::size_t u = half; u < n; ++u) {
      const auto degree = design.neighbors(u).size();
      if (degree == 0) ++isolated;
      edges_total += static_cast<double>(degree);
    }
    isolated_total += static_cast<double>(isolated);
    if (4 * isolated > n) ++many;
  }
  const double graphs = static_cast<double>(n_graphs);
  result.freq_many_isolated = static_cast<double>(many) / graphs;
  result.mean_isolated_U2 = isolated_total / graphs;
  result.mean_U2_edges = edges_total / graphs;
  return result;
}

TableFormat parse_table_format(const std::string& text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "json") return TableFormat::json;
  throw InvalidInput("unknown output format '" + text + "' (expected csv or json)");
}

std::string format_table(const ExperimentTable& table, TableFormat format) {
  if (format == TableFormat::json) return detail::dump_json(detail::to_json(table));
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[256];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%zu\n", to_string(r.method).c_str(),
                  r.gamma, r.mean_ratio, r.std_ratio, r.mean_edges, r.optimality_freq, r.n_samples);
    out += buf;
  }
  return out;
}

void emit_results(const ExperimentTable& table, const std::filesystem::path& path,
                  TableFormat format) {
  detail::write_text_file(path, format_table(table, format));
}

ExperimentTable parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw InvalidInput("results CSV must start with the header '" + std::string(kCsvHeader) + "'");
  ExperimentTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7)
      throw InvalidInput("results CSV line " + std::to_string(line_no) + ": expected 7 columns");
    try {
      table.rows.push_back({parse_method(cells[0]), std::stod(cells[1]), std::stod(cells[2]),
                            std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5]),
                            static_cast<std::size_t>(std::stoull(cells[6]))});
    } catch (const std::logic_error& e) {
      throw InvalidInput("results CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

DesignSnapshot design_snapshot(const DesignGraph& graph,
                               const std::optional<std::vector<std::string>>& supply_class) {
  DesignSnapshot snap;
  snap.supply_degree = graph.supply_degrees();
  snap.demand_degree = graph.demand_degrees();
  for (auto d : snap.supply_degree) ++snap.supply_degree_histogram[d];
  for (auto d : snap.demand_degree) ++snap.demand_degree_histogram[d];
  if (supply_class) {
    if (supply_class->size() != graph.m())
      throw InvalidInput("supply class labels must cover every supply node");
    const double total = static_cast<double>(graph.edge_count());
    for (std::size_t u = 0; u < graph.m(); ++u) {
      auto& share = snap.class_edge_share[(*supply_class)[u]];
      if (total > 0.0) share += static_cast<double>(snap.supply_degree[u]) / total;
    }
  }
  return snap;
}

std::vector<std::string> two_level_classes(std::size_t m) {
  std::vector<std::string> labels(m, "U1");
  for (std::size_t u = m / 2; u < m; ++u) labels[u] = "U2";
  return labels;
}

std::string design_snapshot_to_json(const DesignGraph& graph,
                                    const std::optional<std::vector<std::string>>& supply_class) {
  auto j = detail::to_json(design_snapshot(graph, supply_class));
  j["design"] = detail::to_json(graph);
  return detail::dump_json(j);
}

void emit_design_snapshot(const DesignGraph& graph, const std::filesystem::path& path,
                          const std::optional<std::vector<std::string>>& supply_class) {
  detail::write_text_file(path, design_snapshot_to_json(graph, supply_class));
}

}  // namespace flexdesign
