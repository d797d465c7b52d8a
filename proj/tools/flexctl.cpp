// flexctl: generate instances, build and evaluate designs, run audits and
// experiments. Exit codes: 0 ok, 1 audit failed under --strict, 2 bad usage
// or unreadable input.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <flexdesign/flexdesign.hpp>

using namespace flexdesign;

namespace {

constexpr int kUsageError = 2;
constexpr int kAuditFailed = 1;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text)) throw IoError(out + ": cannot write");
}

std::string real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string cell; std::getline(in, cell, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::logic_error&) {
      throw InvalidInput(std::string(what) + ": cannot parse '" + cell + "' as a number");
    }
  }
  if (out.empty()) throw InvalidInput(std::string(what) + ": empty list");
  return out;
}

// --- gen ---------------------------------------------------------------

struct GenArgs {
  std::size_t m = 100;
  std::size_t n = 100;
  double alpha = 0.1;
  double beta = 0.5;
  double cap = 50.0;
  std::uint64_t seed = 0;
  std::string supply, demand;
  std::string out;
};

void add_gen(CLI::App& app, GenArgs& a, std::function<void()>& action) {
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->require_subcommand(1);

  auto* two = gen->add_subcommand("two-level", "Two supply levels (2-alpha)/n and alpha/n");
  two->add_option("--n", a.n, "Nodes per side (even)")->required();
  two->add_option("--alpha", a.alpha, "Small-supply level, in (0,1)")->required();
  two->add_option("--seed", a.seed, "Unused; accepted for uniformity");
  two->add_option("--out", a.out, "Output path (default stdout)");
  two->callback([&] { action = [&] { emit(a.out, instance_to_json(make_two_level_instance(a.n, a.alpha))); }; });

  auto* pareto = gen->add_subcommand("pareto", "Truncated Pareto means");
  pareto->add_option("--m", a.m, "Supply nodes")->required();
  pareto->add_option("--n", a.n, "Demand nodes")->required();
  pareto->add_option("--beta", a.beta, "Shape parameter")->required();
  pareto->add_option("--cap", a.cap, "Truncation point")->capture_default_str();
  pareto->add_option("--seed", a.seed, "Draw seed")->required();
  pareto->add_option("--out", a.out, "Output path (default stdout)");
  pareto->callback([&] {
    action = [&] { emit(a.out, instance_to_json(make_pareto_instance(a.m, a.n, a.beta, a.cap, a.seed))); };
  });

  auto* uniform = gen->add_subcommand("uniform", "Means drawn from U[0,1]");
  uniform->add_option("--m", a.m, "Supply nodes")->required();
  uniform->add_option("--n", a.n, "Demand nodes")->required();
  uniform->add_option("--seed", a.seed, "Draw seed")->required();
  uniform->add_option("--out", a.out, "Output path (default stdout)");
  uniform->callback([&] { action = [&] { emit(a.out, instance_to_json(make_uniform_instance(a.m, a.n, a.seed))); }; });

  auto* custom = gen->add_subcommand("custom", "Explicit raw means, normalized");
  custom->add_option("--supply", a.supply, "Comma-separated supply means")->required();
  custom->add_option("--demand", a.demand, "Comma-separated demand means")->required();
  custom->add_option("--out", a.out, "Output path (default stdout)");
  custom->callback([&] {
    action = [&] {
      emit(a.out, instance_to_json(make_instance_from_means(parse_list(a.supply, "--supply"),
                                                            parse_list(a.demand, "--demand"))));
    };
  });
}

// --- build -------------------------------------------------------------

struct BuildArgs {
  std::string instance;
  std::string method;
  std::optional<double> gamma;
  std::optional<double> epsilon;
  double kappa = 1.0;
  double c0 = 1.0;
  std::optional<double> threshold_c;
  std::uint64_t seed = 0;
  std::string out;
};

void run_build(const BuildArgs& a) {
  const auto system = read_instance(a.instance);
  ConstructionConfig cfg;
  cfg.seed = a.seed;
  if (a.gamma) {
    cfg.gamma_mode = DirectGamma{*a.gamma};
    cfg.threshold_c = a.threshold_c.value_or(ConstructionConfig::kExperimentThreshold);
  } else {
    cfg.gamma_mode = TheoryGamma{*a.epsilon, a.kappa, a.c0};
    cfg.threshold_c = a.threshold_c.value_or(ConstructionConfig::kTheoryThreshold);
  }
  emit(a.out, design_to_json(build_design(system, cfg, parse_method(a.method))));
}

void add_build(CLI::App& app, BuildArgs& a, std::function<void()>& action) {
  auto* build = app.add_subcommand("build", "Sample a flexibility design for an instance");
  build->add_option("--instance", a.instance, "Instance JSON")->required();
  build->add_option("--method", a.method, "tpc, wpc, upc or full")->required();
  auto* gamma = build->add_option("--gamma", a.gamma, "Density parameter");
  auto* eps = build->add_option("--epsilon", a.epsilon, "Target loss; derives gamma");
  build->add_option("--kappa", a.kappa, "Variation bound used with --epsilon")->needs(eps);
  build->add_option("--c0", a.c0, "Constant used with --epsilon")->needs(eps);
  gamma->excludes(eps);
  build->add_option("--threshold-c", a.threshold_c,
                    "Importance threshold (default 0.5 with --gamma, 0.2 with --epsilon)");
  build->add_option("--seed", a.seed, "Sampling seed")->required();
  build->add_option("--out", a.out, "Output path (default stdout)");
  build->callback([&, gamma, eps] {
    if (gamma->count() + eps->count() == 0) throw CLI::ValidationError("build", "one of --gamma or --epsilon is required");
    action = [&] { run_build(a); };
  });
}

// --- scenario sources shared by eval and audit --------------------------

struct ScenarioArgs {
  std::string scenario;
  std::string instance;
  std::optional<std::uint64_t> seed;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a) {
  cmd->add_option("--scenario", a.scenario, "Scenario JSON (takes precedence over sampling)");
  cmd->add_option("--instance", a.instance, "Instance JSON (samples a scenario with --seed)");
  cmd->add_option("--seed", a.seed, "Scenario seed when sampling from --instance");
}

Scenario load_scenario(const ScenarioArgs& a) {
  if (!a.scenario.empty()) return read_scenario(a.scenario);
  if (a.instance.empty()) throw InvalidInput("a scenario needs --scenario or --instance with --seed");
  if (!a.seed) throw InvalidInput("--instance needs --seed to sample a scenario");
  return sample_scenario(read_instance(a.instance), *a.seed);
}

// --- eval --------------------------------------------------------------

struct EvalArgs {
  std::string design;
  ScenarioArgs source;
  std::string out;
};

void run_eval(const EvalArgs& a) {
  const auto design = read_design(a.design);
  const auto scenario = load_scenario(a.source);
  const auto flow = max_fulfilled_demand(design, scenario);
  emit(a.out, "{\n  \"Z_G\": " + real(flow.value) + ",\n  \"Z_F\": " + real(full_flex_value(scenario)) +
                  ",\n  \"ratio\": " + real(flow.ratio_to_full) + "\n}\n");
}

// --- audit -------------------------------------------------------------

struct AuditArgs {
  std::string design;
  ScenarioArgs source;
  std::string profile_instance;
  AuditConfig config;
  std::optional<double> tau;
  double threshold_c = ConstructionConfig::kTheoryThreshold;
  bool strict = false;
  std::string out;
};

int run_audit(const std::string& condition, const AuditArgs& a) {
  const auto design = read_design(a.design);
  auto cfg = a.config;
  cfg.tau = a.tau;
  cfg.validate();
  auto profile = [&] {
    const auto& path = a.profile_instance.empty() ? a.source.instance : a.profile_instance;
    if (path.empty()) throw InvalidInput("expansion audits need --instance for the importance profile");
    return importance_profile(read_instance(path), a.threshold_c);
  };
  AuditReport report;
  if (condition == "cut")
    report = cut_condition_audit(design, load_scenario(a.source), cfg.epsilon, cfg.max_enumeration_m);
  else if (condition == "either-or")
    report = either_or_audit(design, load_scenario(a.source), cfg);
  else if (condition == "expansion-demand")
    report = expansion_audit_demand(design, profile(), load_scenario(a.source), cfg);
  else
    report = expansion_audit_importance(design, profile(), cfg);
  emit(a.out, audit_report_to_json(report));
  return a.strict && !report.pass ? kAuditFailed : 0;
}

void add_audit(CLI::App& app, AuditArgs& a, std::function<int()>& action) {
  auto* audit = app.add_subcommand("audit", "Check a structural condition by subset enumeration");
  audit->require_subcommand(1);
  const char* conditions[][2] = {
      {"cut", "d(Gamma(L)) + s(U\\L) >= 1 - 2 eps for all L"},
      {"either-or", "per-subset demand or reverse-neighborhood slack"},
      {"expansion-demand", "d(Gamma(L)) >= min(1 - delta, kappa q(L) / c_L)"},
      {"expansion-importance", "p(Gamma(L)) >= 1 - tau whenever q(L) >= tau"}};
  for (auto& [name, help] : conditions) {
    auto* cmd = audit->add_subcommand(name, help);
    const std::string condition = name;
    cmd->add_option("--design", a.design, "Design JSON")->required();
    if (condition != "expansion-importance") {
      add_scenario_options(cmd, a.source);
    } else {
      cmd->add_option("--instance", a.profile_instance, "Instance JSON for the importance profile")->required();
    }
    cmd->add_option("--epsilon", a.config.epsilon, "Loss tolerance")->capture_default_str();
    cmd->add_option("--kappa", a.config.kappa, "Variation bound")->capture_default_str();
    cmd->add_option("--delta", a.config.delta, "Demand expansion slack")->capture_default_str();
    cmd->add_option("--tau", a.tau, "Importance threshold (default 1/(2 kappa))");
    cmd->add_option("--c-L", a.config.c_L, "Constant in the demand expansion bound")->capture_default_str();
    cmd->add_option("--threshold-c", a.threshold_c, "Threshold for the importance profile")->capture_default_str();
    cmd->add_option("--max-m", a.config.max_enumeration_m, "Largest m to enumerate")->capture_default_str();
    cmd->add_flag("--strict", a.strict, "Exit 1 when the condition fails");
    cmd->add_option("--out", a.out, "Output path (default stdout)");
    cmd->callback([&, condition] { action = [&, condition] { return run_audit(condition, a); }; });
  }
}

// --- experiment --------------------------------------------------------

struct ExperimentArgs {
  std::string plan;
  std::string mode = "ratio";
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::size_t jobs = 0;
  std::string out;
  // isolation mode
  std::size_t n = 100;
  double alpha = 0.1;
  std::optional<double> gamma;
  std::size_t graphs = 1000;
};

bool plan_has_seed(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw IoError(path + ": malformed JSON");
  return j.is_object() && j.contains("master_seed");
}

std::string format_optimality(const std::vector<OptimalityRow>& rows, TableFormat format) {
  std::string out;
  if (format == TableFormat::csv) {
    out = "method,gamma,pooled_freq,min_graph_freq,max_graph_freq,n_samples\n";
    char buf[160];
    for (const auto& r : rows) {
      const auto [lo, hi] = std::minmax_element(r.per_graph_freq.begin(), r.per_graph_freq.end());
      std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%zu\n", to_string(r.method).c_str(), r.gamma,
                    r.pooled_freq, *lo, *hi, r.n_samples);
      out += buf;
    }
    return out;
  }
  out = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += "  {\"method\": \"" + to_string(r.method) + "\", \"gamma\": " + real(r.gamma) +
           ", \"pooled_freq\": " + real(r.pooled_freq) + ", \"per_graph_freq\": [";
    for (std::size_t g = 0; g < r.per_graph_freq.size(); ++g)
      out += (g ? ", " : "") + real(r.per_graph_freq[g]);
    out += "], \"n_samples\": " + std::to_string(r.n_samples) + "}" + (i + 1 < rows.size() ? ",\n" : "\n");
  }
  return out + "]\n";
}

std::string format_isolation(const IsolationResult& r, TableFormat format) {
  if (format == TableFormat::csv) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "freq_many_isolated,mean_isolated_U2,mean_U2_edges,expected_U2_edges,n_graphs\n"
                  "%.6f,%.6f,%.6f,%.6f,%zu\n",
                  r.freq_many_isolated, r.mean_isolated_U2, r.mean_U2_edges, r.expected_U2_edges, r.n_graphs);
    return buf;
  }
  return "{\n  \"freq_many_isolated\": " + real(r.freq_many_isolated) + ",\n  \"mean_isolated_U2\": " +
         real(r.mean_isolated_U2) + ",\n  \"mean_U2_edges\": " + real(r.mean_U2_edges) +
         ",\n  \"expected_U2_edges\": " + real(r.expected_U2_edges) + ",\n  \"n_graphs\": " +
         std::to_string(r.n_graphs) + "\n}\n";
}

void run_experiment(const ExperimentArgs& a) {
  const auto format = parse_table_format(a.format);
  if (a.mode == "isolation") {
    if (!a.seed) throw InvalidInput("isolation mode needs --seed");
    if (!a.gamma) throw InvalidInput("isolation mode needs --gamma");
    emit(a.out, format_isolation(run_isolation_experiment(a.n, a.alpha, *a.gamma, a.graphs, *a.seed), format));
    return;
  }
  if (a.plan.empty()) throw InvalidInput("--plan is required for mode " + a.mode);
  if (!a.seed && !plan_has_seed(a.plan))
    throw InvalidInput("no seed: pass --seed or set master_seed in " + a.plan);
  auto plan = read_plan(a.plan);
  if (a.seed) plan.master_seed = *a.seed;
  const RunOptions options{a.jobs};
  if (a.mode == "ratio")
    emit(a.out, format_table(run_ratio_experiment(plan, options), format));
  else
    emit(a.out, format_optimality(run_optimality_experiment(plan, options), format));
}

void add_experiment(CLI::App& app, ExperimentArgs& a, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  cmd->add_option("--plan", a.plan, "Plan JSON");
  cmd->add_option("--mode", a.mode, "ratio, optimality or isolation")
      ->check(CLI::IsMember({"ratio", "optimality", "isolation"}))
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Master seed (overrides the plan)");
  cmd->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--jobs", a.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--out", a.out, "Output path (default stdout)");
  cmd->add_option("--n", a.n, "Isolation: nodes per side")->capture_default_str();
  cmd->add_option("--alpha", a.alpha, "Isolation: small-supply level")->capture_default_str();
  cmd->add_option("--gamma", a.gamma, "Isolation: density parameter");
  cmd->add_option("--graphs", a.graphs, "Isolation: designs to sample")->capture_default_str();
  cmd->callback([&] { action = [&] { run_experiment(a); }; });
}

// --- snapshot ----------------------------------------------------------

struct SnapshotArgs {
  std::string design;
  std::string classes = "two-level";
  std::string out;
};

void run_snapshot(const SnapshotArgs& a) {
  const auto design = read_design(a.design);
  std::optional<std::vector<std::string>> labels;
  if (a.classes == "two-level") labels = two_level_classes(design.m());
  emit(a.out, design_snapshot_to_json(design, labels));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse process flexibility designs: build, evaluate, audit, experiment", "flexctl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "flexctl 0.1.0");

  std::function<void()> action;
  std::function<int()> audit_action;
  GenArgs gen;
  BuildArgs build;
  EvalArgs eval;
  AuditArgs audit;
  ExperimentArgs experiment;
  SnapshotArgs snapshot;

  add_gen(app, gen, action);
  add_build(app, build, action);

  auto* eval_cmd = app.add_subcommand("eval", "Max fulfilled demand of a design on one scenario");
  eval_cmd->add_option("--design", eval.design, "Design JSON")->required();
  add_scenario_options(eval_cmd, eval.source);
  eval_cmd->add_option("--out", eval.out, "Output path (default stdout)");
  eval_cmd->callback([&] { action = [&] { run_eval(eval); }; });

  add_audit(app, audit, audit_action);
  add_experiment(app, experiment, action);

  auto* snap_cmd = app.add_subcommand("snapshot", "Degrees, histograms and class edge shares of a design");
  snap_cmd->add_option("--design", snapshot.design, "Design JSON")->required();
  snap_cmd->add_option("--classes", snapshot.classes, "two-level or none")
      ->check(CLI::IsMember({"two-level", "none"}))
      ->capture_default_str();
  snap_cmd->add_option("--out", snapshot.out, "Output path (default stdout)");
  snap_cmd->callback([&] { action = [&] { run_snapshot(snapshot); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (audit_action) return audit_action();
    if (action) action();
    return 0;
  } catch (const std::exception& e) {
    // InvalidInput, InvalidInstance, IoError, TooLarge and bad ids all land here
    std::cerr << "flexctl: " << e.what() << "\n";
    return kUsageError;
  }
}
