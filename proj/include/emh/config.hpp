#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "emh/model.hpp"

namespace emh {

/// Reads a deployment object. Missing keys take the defaults of the model
/// structs; unknown keys are rejected so that typos do not silently fall back
/// to defaults. Throws DeploymentError for malformed input or violated
/// invariants. With check_invariants unset only the structure is checked.
Deployment deployment_from_json(const nlohmann::json& j, bool check_invariants = true);
nlohmann::json deployment_to_json(const Deployment& d);

/// Loads the "deployment" member of a config document, or the whole document
/// when it has no such member.
Deployment load_deployment(const std::filesystem::path& path, bool check_invariants = true);

nlohmann::json read_json_file(const std::filesystem::path& path);

// Routing vectors travel as a plain integer array: station s at position s-1.
nlohmann::json routing_to_json(const RoutingVector& r);
RoutingVector routing_from_json(const nlohmann::json& j);

}  // namespace emh
