#include "flexdesign/json_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "flexdesign/errors.hpp"
#include "json_support.hpp"

namespace flexdesign {

namespace detail {

namespace {

bool is_flat(const json& value) {
  if (!value.is_array()) return false;
  for (const auto& x : value) {
    if (x.is_object()) return false;
    if (x.is_array())
      for (const auto& y : x)
        if (y.is_structured()) return false;
  }
  return true;
}

void dump_scalar(const json& value, std::string& out) {
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (!std::isfinite(x)) {
      out += "null";
      return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
  } else {
    out += value.dump();
  }
}

void dump_inline(const json& value, std::string& out) {
  if (value.is_array()) {
    out += '[';
    bool first = true;
    for (const auto& x : value) {
      if (!first) out += ", ";
      first = false;
      dump_inline(x, out);
    }
    out += ']';
  } else {
    dump_scalar(value, out);
  }
}

void dump_pretty(const json& value, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (value.is_object()) {
    if (value.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      dump_pretty(it.value(), out, indent + 2);
    }
    out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
  } else if (value.is_array() && !is_flat(value)) {
    out += "[\n";
    bool first = true;
    for (const auto& x : value) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      dump_pretty(x, out, indent + 2);
    }
    out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
  } else {
    dump_inline(value, out);
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

json dist_to_json(const DistributionSpec& d) {
  json j{{"kind", to_string(d.kind)}};
  if (d.kind == DistributionKind::scaled_two_point) {
    j["factor"] = d.factor;
    j["prob"] = d.prob;
  } else if (d.kind == DistributionKind::multinomial_allocated) {
    j["total"] = d.total;
    j["weight"] = d.weight;
    j["units"] = d.units;
  }
  return j;
}

DistributionSpec dist_from_json(const json& j) {
  if (j.is_string()) return {.kind = parse_distribution_kind(j.get<std::string>())};
  DistributionSpec d;
  d.kind = parse_distribution_kind(field<std::string>(j, "kind"));
  d.factor = field_or<double>(j, "factor", d.factor);
  d.prob = field_or<double>(j, "prob", d.prob);
  d.total = field_or<double>(j, "total", d.total);
  d.weight = field_or<double>(j, "weight", d.weight);
  d.units = field_or<std::uint32_t>(j, "units", d.units);
  return d;
}

std::vector<DistributionSpec> dists_from_json(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw InvalidInput(std::string("field '") + key + "' must be an array");
  std::vector<DistributionSpec> out;
  for (const auto& x : j.at(key)) out.push_back(dist_from_json(x));
  return out;
}

json source_to_json(const InstanceSource& source) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoLevelFamily>)
          return {{"kind", "two-level"}, {"n", s.n}, {"alpha", s.alpha}};
        else if constexpr (std::is_same_v<T, ParetoFamily>)
          return {{"kind", "pareto"}, {"m", s.m},     {"n", s.n},
                  {"beta", s.beta},   {"cap", s.cap}, {"seed", s.seed}};
        else if constexpr (std::is_same_v<T, UniformFamily>)
          return {{"kind", "uniform"}, {"m", s.m}, {"n", s.n}, {"seed", s.seed}};
        else
          return {{"kind", "instance"}, {"instance", to_json(s.system)}};
      },
      source);
}

InstanceSource source_from_json(const json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "two-level")
    return TwoLevelFamily{field<std::size_t>(j, "n"), field<double>(j, "alpha")};
  if (kind == "pareto")
    return ParetoFamily{field<std::size_t>(j, "m"), field<std::size_t>(j, "n"),
                        field<double>(j, "beta"), field_or<double>(j, "cap", 50.0),
                        field_or<std::uint64_t>(j, "seed", 0)};
  if (kind == "uniform")
    return UniformFamily{field<std::size_t>(j, "m"), field<std::size_t>(j, "n"),
                         field_or<std::uint64_t>(j, "seed", 0)};
  if (kind == "instance") {
    if (!j.contains("instance")) throw InvalidInput("instance family needs 'instance' or 'path'");
    return FixedInstance{system_from_json(j.at("instance"))};
  }
  throw InvalidInput("unknown instance family '" + kind + "'");
}

}  // namespace

std::string dump_json(const json& value) {
  std::string out;
  dump_pretty(value, out, 0);
  out += '\n';
  return out;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(origin + ": malformed JSON: " + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

json to_json(const ProductionSystem& system) {
  json sd = json::array();
  for (const auto& d : system.supply_dist()) sd.push_back(dist_to_json(d));
  json dd = json::array();
  for (const auto& d : system.demand_dist()) dd.push_back(dist_to_json(d));
  return {{"m", system.m()},
          {"n", system.n()},
          {"kappa", system.kappa()},
          {"mean_supply", std::vector<double>(system.mean_supply().begin(), system.mean_supply().end())},
          {"mean_demand", std::vector<double>(system.mean_demand().begin(), system.mean_demand().end())},
          {"supply_dist", std::move(sd)},
          {"demand_dist", std::move(dd)}};
}

ProductionSystem system_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
  auto supply = field<std::vector<double>>(j, "mean_supply");
  auto demand = field<std::vector<double>>(j, "mean_demand");
  const auto m = field_or<std::size_t>(j, "m", supply.size());
  const auto n = field_or<std::size_t>(j, "n", demand.size());
  if (m != supply.size() || n != demand.size())
    throw InvalidInput("instance 'm'/'n' disagree with the mean vectors");
  auto sd = j.contains("supply_dist")
                ? dists_from_json(j, "supply_dist")
                : std::vector<DistributionSpec>(m, DistributionSpec::deterministic());
  auto dd = j.contains("demand_dist") ? dists_from_json(j, "demand_dist")
                                      : std::vector<DistributionSpec>(n, DistributionSpec::two_point());
  return ProductionSystem(std::move(supply), std::move(demand), std::move(sd), std::move(dd),
                          field<double>(j, "kappa"));
}

json to_json(const DesignGraph& graph) {
  json edges = json::array();
  for (std::size_t u = 0; u < graph.m(); ++u)
    for (auto v : graph.neighbors(u)) edges.push_back(json::array({u, v}));
  return {{"method", to_string(graph.method())},
          {"gamma", graph.gamma()},
          {"seed", graph.seed()},
          {"m", graph.m()},
          {"n", graph.n()},
          {"edges", std::move(edges)}};
}

DesignGraph design_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("design must be a JSON object");
  const auto m = field<std::size_t>(j, "m");
  const auto n = field<std::size_t>(j, "n");
  std::vector<std::vector<std::uint32_t>> adj(m);
  for (const auto& e : field<std::vector<std::array<std::size_t, 2>>>(j, "edges")) {
    if (e[0] >= m || e[1] >= n) throw InvalidInput("design edge endpoint out of range");
    adj[e[0]].push_back(static_cast<std::uint32_t>(e[1]));
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return DesignGraph(m, n, std::move(adj), parse_method(field_or<std::string>(j, "method", "FULL")),
                     field_or<double>(j, "gamma", 0.0), field_or<std::uint64_t>(j, "seed", 0));
}

json to_json(const Scenario& scenario) {
  return {{"seed", scenario.seed}, {"supply", scenario.supply}, {"demand", scenario.demand}};
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("scenario must be a JSON object");
  return {field<std::vector<double>>(j, "supply"), field<std::vector<double>>(j, "demand"),
          field_or<std::uint64_t>(j, "seed", 0)};
}

json to_json(const AuditReport& report) {
  json j{{"condition", report.condition}, {"pass", report.pass}};
  if (report.worst) {
    j["worst_subset"] = report.worst->subset;
    j["lhs"] = report.worst->lhs;
    j["rhs"] = report.worst->rhs;
    j["gap"] = report.worst->gap;
  } else {
    j["worst_subset"] = json::array();
    j["lhs"] = nullptr;
    j["rhs"] = nullptr;
    j["gap"] = nullptr;
  }
  j["subsets_checked"] = report.subsets_checked;
  return j;
}

json to_json(const ExperimentTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"method", to_string(r.method)},
                    {"gamma", r.gamma},
                    {"mean_ratio", r.mean_ratio},
                    {"std_ratio", r.std_ratio},
                    {"mean_edges", r.mean_edges},
                    {"optimality_freq", r.optimality_freq},
                    {"n_samples", r.n_samples}});
  return rows;
}

json to_json(const DesignSnapshot& snapshot) {
  auto histogram = [](const std::map<std::size_t, std::size_t>& h) {
    json j = json::object();
    for (auto [degree, count] : h) j[std::to_string(degree)] = count;
    return j;
  };
  json shares = json::object();
  for (const auto& [label, share] : snapshot.class_edge_share) shares[label] = share;
  return {{"supply_degree", snapshot.supply_degree},
          {"demand_degree", snapshot.demand_degree},
          {"supply_degree_histogram", histogram(snapshot.supply_degree_histogram)},
          {"demand_degree_histogram", histogram(snapshot.demand_degree_histogram)},
          {"class_edge_share", std::move(shares)}};
}

json to_json(const ExperimentPlan& plan) {
  json methods = json::array();
  for (auto m : plan.methods) methods.push_back(to_string(m));
  return {{"family", source_to_json(plan.source)},
          {"methods", std::move(methods)},
          {"gamma_grid", plan.gamma_grid},
          {"n_graphs", plan.n_graphs},
          {"n_scenarios", plan.n_scenarios},
          {"epsilon", plan.epsilon},
          {"master_seed", plan.master_seed},
          {"threshold_c", plan.threshold_c}};
}

ExperimentPlan plan_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("plan must be a JSON object");
  ExperimentPlan plan;
  const auto preset = field_or<std::string>(j, "preset", "desk");
  if (preset == "full") {
    plan.n_graphs = 100;
    plan.n_scenarios = 1000;
  } else if (preset != "desk") {
    throw InvalidInput("unknown plan preset '" + preset + "'");
  }
  if (j.contains("family")) plan.source = source_from_json(j.at("family"));
  if (j.contains("methods")) {
    plan.methods.clear();
    for (const auto& name : field<std::vector<std::string>>(j, "methods"))
      plan.methods.push_back(parse_method(name));
  }
  plan.gamma_grid = field_or<std::vector<double>>(j, "gamma_grid", plan.gamma_grid);
  plan.n_graphs = field_or<std::size_t>(j, "n_graphs", plan.n_graphs);
  plan.n_scenarios = field_or<std::size_t>(j, "n_scenarios", plan.n_scenarios);
  plan.epsilon = field_or<double>(j, "epsilon", plan.epsilon);
  plan.master_seed = field_or<std::uint64_t>(j, "master_seed", plan.master_seed);
  plan.threshold_c = field_or<double>(j, "threshold_c", plan.threshold_c);
  plan.validate();
  return plan;
}

}  // namespace detail

std::string instance_to_json(const ProductionSystem& system) {
  return detail::dump_json(detail::to_json(system));
}
ProductionSystem instance_from_json(const std::string& text) {
  return detail::system_from_json(detail::parse_json_text(text, "<instance>"));
}
void write_instance(const std::filesystem::path& path, const ProductionSystem& system) {
  detail::write_text_file(path, instance_to_json(system));
}
ProductionSystem read_instance(const std::filesystem::path& path) {
  try {
    return detail::system_from_json(detail::read_json_file(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  } catch (const InvalidInstance& e) {
    throw InvalidInstance(path.string() + ": " + e.what());
  }
}

std::string design_to_json(const DesignGraph& graph) {
  return detail::dump_json(detail::to_json(graph));
}
DesignGraph design_from_json(const std::string& text) {
  return detail::design_from_json(detail::parse_json_text(text, "<design>"));
}
void write_design(const std::filesystem::path& path, const DesignGraph& graph) {
  detail::write_text_file(path, design_to_json(graph));
}
DesignGraph read_design(const std::filesystem::path& path) {
  try {
    return detail::design_from_json(detail::read_json_file(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

std::string scenario_to_json(const Scenario& scenario) {
  return detail::dump_json(detail::to_json(scenario));
}
void write_scenario(const std::filesystem::path& path, const Scenario& scenario) {
  detail::write_text_file(path, scenario_to_json(scenario));
}
Scenario read_scenario(const std::filesystem::path& path) {
  try {
    return detail::scenario_from_json(detail::read_json_file(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

std::string audit_report_to_json(const AuditReport& report) {
  return detail::dump_json(detail::to_json(report));
}

std::string plan_to_json(const ExperimentPlan& plan) {
  return detail::dump_json(detail::to_json(plan));
}
ExperimentPlan plan_from_json(const std::string& text) {
  return detail::plan_from_json(detail::parse_json_text(text, "<plan>"));
}
ExperimentPlan read_plan(const std::filesystem::path& path) {
  try {
    auto j = detail::read_json_file(path);
    // an instance file may be referenced relative to the plan
    if (j.contains("family") && j["family"].value("kind", "") == "instance" &&
        j["family"].contains("path")) {
      auto instance_path = path.parent_path() / j["family"]["path"].get<std::string>();
      j["family"]["instance"] = detail::read_json_file(instance_path);
    }
    return detail::plan_from_json(j);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  } catch (const InvalidInstance& e) {
    throw InvalidInstance(path.string() + ": " + e.what());
  }
}

}  // namespace flexdesign
