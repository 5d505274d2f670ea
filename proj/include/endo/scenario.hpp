#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "endo/teleop/simulation.hpp"

namespace endo {

struct ScenarioOutputs {
  std::string trace_path;    // empty = no trace file
  std::string summary_path;  // empty = no summary file
};

struct Scenario {
  SimConfig sim;
  ScenarioOutputs outputs;
};

/// Apply one `path.to.field=value` override onto the raw config document.
/// The value parses as JSON when it can (numbers, booleans, arrays) and
/// falls back to a plain string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validate and build a scenario from a parsed document. Validation is
/// all-or-nothing: every offending field is collected and reported together
/// in a ConfigError, each as `dotted.path: constraint`.
Scenario parse_scenario(const nlohmann::json& doc);

/// Load from file, apply overrides, parse. Throws InvalidInput when the file
/// is unreadable and ConfigError for syntax or validation problems.
Scenario load_scenario(const std::string& path,
                       const std::vector<std::string>& overrides = {});

/// Machine-readable run summary.
nlohmann::json summary_to_json(const SummaryStats& stats);

/// Human-readable run summary.
std::string summary_to_text(const SummaryStats& stats);

}  // namespace endo
