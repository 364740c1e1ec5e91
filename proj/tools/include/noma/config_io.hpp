#pragma once

// JSON configuration files. One format covers every command:
//
//   {
//     "system":  { "num_users": 4, "num_subcarriers": 4, "bandwidth_hz": 1e6,
//                  "noise_psd_dbm_per_hz": -174, "decoder_efficiency_j_per_mbit": 0.01,
//                  "rate_demand_mbps": 4, "cluster_cap": 2, "penalty_exponent": 10,
//                  "tau_factor": 1e-3, "epsilon_factor": 1e-6,
//                  "channel": { "area_side_m": 300, "shadowing_std_db": 4, "rayleigh_fading": true } },
//     "solver":  { "outer_tol": 1e-5, "tau_schedule": "fixed", ... },
//     "sweep":   { "axis": "rate_demand", "values": [4, 8, 12] },
//     "num_drops": 50, "base_seed": 1, "solvers": ["jpcuc", "oma"],
//     "output_dir": "results", "threads": 0
//   }
//
// Every key is optional and overrides the matching field of the defaults
// passed in. Scalar demand or decoder efficiency applies to all users.
// Unknown keys are rejected so typos do not pass silently.

#include <filesystem>
#include <string>
#include <string_view>

#include "noma/channel.hpp"
#include "noma/experiment.hpp"
#include "noma/solver.hpp"

namespace noma {

/// Throws ConfigError on malformed JSON, unknown keys or wrongly typed values.
ExperimentSpec parse_experiment(std::string_view json_text, const ExperimentSpec& defaults);
ExperimentSpec load_experiment(const std::filesystem::path& path, const ExperimentSpec& defaults);

/// Full JSON for `spec`; parse_experiment of the result reproduces it.
std::string dump_experiment(const ExperimentSpec& spec);

/// Rates and powers are user-indexed (row = user, column = subcarrier) and
/// supports list user indices, translated through the channel ranking.
std::string report_to_json(const SolveReport& report, const ChannelSet& ch);

}  // namespace noma
