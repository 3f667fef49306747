#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "inekf/config.hpp"
#include "inekf/sim.hpp"

namespace inekf {

// JSON config loading with strict key checking: unknown or ill-typed keys
// raise ConfigError naming the offending key. Empty path means defaults.

FilterConfig load_filter_config(const std::string& path);
FilterConfig filter_config_from_json(const nlohmann::json& j);
nlohmann::json filter_config_to_json(const FilterConfig& cfg);

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& sc);

}  // namespace inekf
