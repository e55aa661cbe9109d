#pragma once

#include <string>

#include <json.hpp>

#include "carfollow/harness.hpp"
#include "carfollow/sim.hpp"

namespace carfollow {

/// Dimensions a config quantity may carry; units are validated against the
/// field's dimension and converted to SI on load.
enum class Dimension { Length, Time, Speed, Acceleration, Dimensionless };

/// Parses {"value": 120, "unit": "km/h"} or the string form "120 km/h".
/// Dimensioned quantities must carry an explicit unit; bare numbers are
/// accepted only for Dimensionless.
double parse_quantity(const nlohmann::json& j, Dimension dim, const std::string& field);

/// ModelParams from a (possibly partial) "params" object; unspecified fields
/// keep their defaults. Unknown keys are rejected.
ModelParams params_from_json(const nlohmann::json& j);

LeaderProfile leader_from_json(const nlohmann::json& j);
Scenario scenario_from_json(const nlohmann::json& j);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

}  // namespace carfollow
