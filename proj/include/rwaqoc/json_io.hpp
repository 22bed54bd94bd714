#pragma once

#include <string>

#include <json.hpp>

#include "rwaqoc/rydberg.hpp"
#include "rwaqoc/sweep.hpp"
#include "rwaqoc/transfer.hpp"

namespace rwaqoc {

using json = nlohmann::json;

// {"energies": [...], "couplings": [{"k":int,"j":int,"re":float,"im":float}]}
json to_json(const LevelSystem& system);
LevelSystem level_system_from_json(const json& j);

// {"fields":[{"re":..,"im":..,"omega":..}], "assignment":[[f,k,j],...]};
// assignment optional, resolved by resonance matching otherwise.
json to_json(const DriveSet& drives, const LevelGraph& graph);
DriveSet drive_set_from_json(const json& j, const LevelSystem& system, const LevelGraph& graph,
                             double window = 0.0);

json state_to_json(const Eigen::VectorXcd& state);
Eigen::VectorXcd state_from_json(const json& j);

json to_json(const DegeneracyReport& report);
json to_json(const GammaAssignment& gamma);
json to_json(const RwaValidityReport& report);
json to_json(const CycleConsistency& cycles);

// Self-contained problem + solution document consumed by `double-check`.
json to_json(const TransferProblem& problem, const TransferSolution& solution);
void transfer_from_json(const json& j, TransferProblem& problem, TransferSolution& solution);

json sweep_config_to_json(const SweepConfig& config);
SweepConfig sweep_config_from_json(const json& j);

json to_json(const RydbergReport& report);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace rwaqoc
