#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "noma/config.hpp"
#include "noma/solver.hpp"

namespace noma {

enum class SweepAxis { RateDemand, ClusterCap };
enum class SolverKind { Jpcuc, Oracle, Oma };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(SolverKind kind);
SweepAxis parse_sweep_axis(std::string_view name);
SolverKind parse_solver_kind(std::string_view name);

/// CSV column holding the sweep value: "rate_demand_mbps" or "cluster_cap".
std::string_view sweep_column(SweepAxis axis);

struct ExperimentSpec {
    SystemConfig base;
    SolverOptions options;
    SweepAxis axis = SweepAxis::RateDemand;
    std::vector<double> values;  // Mbit/s per user, or L
    std::size_t num_drops = 1;
    std::uint64_t base_seed = 1;
    std::vector<SolverKind> solvers;
    std::filesystem::path output_dir = "results";
    std::size_t threads = 0;  // worker threads for drops; 0 picks the hardware count
};

/// Throws ConfigError unless values are nonempty and strictly ascending,
/// num_drops >= 1, the solver list is nonempty without repeats, cluster-cap
/// values are integers in [1, M], and the base config is valid for every value.
ExperimentSpec validate_experiment(const ExperimentSpec& spec);

/// M = N = 4, 50 drops, rate demand 4..20 Mbit/s, jpcuc (L = 2), oracle and OMA.
ExperimentSpec desk_preset();
/// M = N = 10, 50 drops, rate demand 4..20 Mbit/s, jpcuc (L = 2) and OMA, no oracle.
ExperimentSpec paper_preset();

/// SystemConfig for one sweep point.
SystemConfig config_at(const ExperimentSpec& spec, double sweep_value);

enum class RowStatus { Ok, NotConverged, Infeasible, Error };
std::string_view to_string(RowStatus status);
RowStatus parse_row_status(std::string_view name);

struct ResultRow {
    double sweep_value = 0.0;
    std::size_t drop = 0;
    std::uint64_t seed = 0;
    std::string solver;
    std::string method;  // which algorithm actually ran, e.g. "oma-exact"
    double total_w = 0.0;
    double transmission_w = 0.0;
    double decoding_w = 0.0;
    std::size_t outer_iters = 0;
    bool cap_satisfied = false;
    RowStatus status = RowStatus::Ok;
    std::string message;
    double wall_time_s = 0.0;  // written only to the timing file, never to the results CSV

    bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
    SweepAxis axis = SweepAxis::RateDemand;
    std::vector<ResultRow> rows;
};

/// Runs every solver on every (sweep value, drop) cell. Drop d uses seed
/// base_seed + d for both geometry and channels, so all solvers and all sweep
/// values see the same channels. Drops run concurrently; rows come back sorted
/// by (sweep value, drop, solver name). Solver failures become rows with
/// status Error and never abort the sweep.
ResultTable run_experiment(const ExperimentSpec& spec);

/// Header plus one row per record, 9 significant digits, units in the header.
/// Throws std::invalid_argument on an empty table (no file is created) and
/// std::runtime_error if the file cannot be written.
void emit_csv(const ResultTable& table, const std::filesystem::path& path);
std::string format_csv(const ResultTable& table);

/// Inverse of emit_csv. wall_time_s is left at zero.
ResultTable parse_csv(const std::filesystem::path& path);
ResultTable parse_csv_text(std::string_view text);

/// Sweep value, drop, solver and wall-clock seconds per row. Kept apart from
/// the results CSV so that file stays byte-identical across reruns.
void emit_timing_csv(const ResultTable& table, const std::filesystem::path& path);

struct SeriesPoint {
    double sweep_value = 0.0;
    double mean_total_w = 0.0;
    std::size_t samples = 0;  // rows that produced a power value
    std::size_t cap_violations = 0;
};

/// Mean total power over drops per (solver, sweep value). Error rows are
/// skipped; infeasible rows carry +inf and make the mean infinite.
std::map<std::string, std::vector<SeriesPoint>> aggregate_series(const ResultTable& table);

/// Writes series_<solver>.dat (two whitespace-separated columns: sweep value,
/// mean total power in W) into `dir`, returning the files written.
std::vector<std::filesystem::path> emit_plot_data(const ResultTable& table, const std::filesystem::path& dir);

}  // namespace noma
