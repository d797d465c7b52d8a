#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "flexdesign/audit.hpp"
#include "flexdesign/construct.hpp"
#include "flexdesign/experiment.hpp"
#include "flexdesign/system.hpp"

namespace flexdesign::detail {

using nlohmann::json;

/// Serializes with every double at 17 significant digits. Objects are
/// indented; arrays holding only scalars (or arrays of scalars) stay on one line.
std::string dump_json(const json& value);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
json parse_json_text(const std::string& text, const std::string& origin);

json to_json(const ProductionSystem& system);
ProductionSystem system_from_json(const json& j);

json to_json(const DesignGraph& graph);
DesignGraph design_from_json(const json& j);

json to_json(const Scenario& scenario);
Scenario scenario_from_json(const json& j);

json to_json(const AuditReport& report);
json to_json(const ExperimentTable& table);
json to_json(const DesignSnapshot& snapshot);

json to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const json& j);

}  // namespace flexdesign::detail
