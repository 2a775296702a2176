#pragma once

#include <string>

#include "json.hpp"
#include "mifpo/core.hpp"
#include "mifpo/pipeline.hpp"
#include "mifpo/solver.hpp"

namespace mifpo {

// JSON shapes:
//   instance: {"alpha0", "rho0", "beta0", "rho1", "beta1", "k", "objective"}
//   front:    {"objective", "baseline_error",
//              "points": [{"gamma", "error", "restarts_used"}]}
// Doubles round-trip exactly (shortest-representation encoding).

nlohmann::json instance_to_json(const MifpoInstance& inst);
MifpoInstance instance_from_json(const nlohmann::json& j);

nlohmann::json front_to_json(const ParetoFront& front);

// gamma,error rows at 12 significant digits.
std::string front_to_csv(const ParetoFront& front);

nlohmann::json model_to_json(const CalibratedModel& model);
CalibratedModel model_from_json(const nlohmann::json& j);

MifpoInstance load_instance(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);
void save_text(const std::string& text, const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace mifpo
