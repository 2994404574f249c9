#pragma once

#include <string>

#include <json.hpp>

#include "chansim/congestion.hpp"
#include "chansim/game.hpp"
#include "chansim/sim.hpp"

namespace chansim {

nlohmann::json spec_to_json(const GameSpec& spec);
GameSpec spec_from_json(const nlohmann::json& j);
GameSpec load_spec(const std::string& path);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

nlohmann::json optimum_to_json(const OptimalSolution& opt);

// One JSON line per PNE profile plus a trailing summary line.
std::string equilibrium_to_json_lines(const EquilibriumReport& report);
// CSV with header: profile;occupancy;potential.
std::string equilibrium_to_csv(const EquilibriumReport& report);

// Locale-independent shortest round-trip formatting for CSV output.
std::string format_double(double x);

}  // namespace chansim
