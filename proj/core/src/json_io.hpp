// Internal JSON conversions shared by the scenario and experiment I/O code.
#ifndef CRANOPT_SRC_JSON_IO_HPP
#define CRANOPT_SRC_JSON_IO_HPP

#include "cranopt/alternating_solver.hpp"
#include "cranopt/baselines.hpp"
#include "cranopt/power_model.hpp"
#include "cranopt/scenario.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace cranopt::detail {

using nlohmann::json;

std::string layout_name(Layout layout);
Layout parse_layout(const std::string& name);

json to_json(const ScenarioConfig& config);
/// Missing keys keep the values already in `config`.
void merge_json(const json& j, ScenarioConfig& config);

/// Power fields accept a bare number (watts) or {"value": v, "unit": "w"|"dbm"}.
json to_json(const PowerParams& params);
void merge_json(const json& j, PowerParams& params);

json to_json(const SolverConfig& config);
void merge_json(const json& j, SolverConfig& config);

json to_json(const EsaConfig& config);
void merge_json(const json& j, EsaConfig& config);

void merge_json(const json& j, TpoaConfig& config);

/// A bare number in watts or {"value": v, "unit": "w"|"dbm"}.
double power_from_json(const json& j, const char* key);

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

/// Throws ValidationError naming `what` when j[key] is missing or has the wrong type.
const json& require(const json& j, const char* key, const char* what);

}  // namespace cranopt::detail

#endif  // CRANOPT_SRC_JSON_IO_HPP
