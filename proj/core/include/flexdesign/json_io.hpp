#pragma once

#include <filesystem>
#include <string>

#include "flexdesign/audit.hpp"
#include "flexdesign/construct.hpp"
#include "flexdesign/experiment.hpp"
#include "flexdesign/system.hpp"

// File formats. Reals are written with 17 significant digits so every
// double survives a round trip. Malformed input throws IoError (with the
// path) or InvalidInput/InvalidInstance (with the offending field).

namespace flexdesign {

// {"m", "n", "kappa", "mean_supply", "mean_demand", "supply_dist", "demand_dist"}
std::string instance_to_json(const ProductionSystem& system);
ProductionSystem instance_from_json(const std::string& text);
void write_instance(const std::filesystem::path& path, const ProductionSystem& system);
ProductionSystem read_instance(const std::filesystem::path& path);

// {"method", "gamma", "seed", "m", "n", "edges": [[u, v], ...]}, edges sorted
std::string design_to_json(const DesignGraph& graph);
DesignGraph design_from_json(const std::string& text);
void write_design(const std::filesystem::path& path, const DesignGraph& graph);
DesignGraph read_design(const std::filesystem::path& path);

// {"seed", "supply": [...], "demand": [...]}
std::string scenario_to_json(const Scenario& scenario);
void write_scenario(const std::filesystem::path& path, const Scenario& scenario);
Scenario read_scenario(const std::filesystem::path& path);

// {"condition", "pass", "worst_subset", "lhs", "rhs", "gap", "subsets_checked"}
std::string audit_report_to_json(const AuditReport& report);

std::string plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const std::string& text);
ExperimentPlan read_plan(const std::filesystem::path& path);

}  // namespace flexdesign
