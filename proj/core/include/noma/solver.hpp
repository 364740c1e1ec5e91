#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "noma/channel.hpp"
#include "noma/config.hpp"
#include "noma/objective.hpp"
#include "noma/transform.hpp"

namespace noma {

enum class TauSchedule { Fixed, GeometricDecay };

struct SolverOptions {
    double outer_tol = 1e-5;          // relative change of the smoothed objective
    std::size_t outer_max_iters = 100;
    double newton_tol = 1e-9;         // barrier gap, relative to |objective|
    std::size_t newton_max_iters = 3000;
    double barrier_mu0 = 1.0;
    double barrier_shrink = 0.2;
    double ls_alpha = 0.3;            // Armijo fraction
    double ls_beta = 0.5;             // backtracking factor
    TauSchedule tau_schedule = TauSchedule::Fixed;
    double tau_decay = 0.5;           // per outer iteration, GeometricDecay only
    double tau_floor_factor = 1e-6;   // τ never drops below this times the rate scale
    double repair_tolerance = 0.01;   // allowed relative power change of the post-threshold re-solve
    std::size_t enumeration_budget = 1'000'000;
};

/// Throws ConfigError on nonpositive tolerances or a shrink factor outside (0, 1).
SolverOptions validate_options(const SolverOptions& opts);

/// Per-subcarrier sets of active ranks (0-based, ascending).
using SupportSets = std::vector<std::vector<std::size_t>>;

struct IterationRecord {
    double smoothed_objective = 0.0;
    double surrogate_value = 0.0;
    double max_constraint_violation = 0.0;  // max_m |Σ_n r - R_m| / R_m
};

struct SolveReport {
    RateAllocation rates;
    PowerAllocation powers;
    ObjectiveBreakdown objective;
    SupportSets support_per_subcarrier;
    std::size_t outer_iters = 0;
    std::vector<IterationRecord> trace;
    bool feasible = true;      // false when no allocation satisfies the cluster cap at all
    bool mm_converged = false; // outer loop met outer_tol before outer_max_iters
    bool converged = false;    // mm_converged, inner solves converged, repair within tolerance
    bool cap_satisfied = false;
    double repair_shift = 0.0; // relative total-power change caused by the post-threshold re-solve
    std::string method;
    std::vector<std::string> warnings;
};

struct SubproblemResult {
    RateAllocation rates;
    bool converged = false;
    std::size_t newton_iters = 0;
    double kkt_residual = 0.0;
    double objective = 0.0;
};

/// Every user's demand split evenly across all subcarriers.
RateAllocation init_feasible(const SystemConfig& cfg, const ChannelSet& ch);

/// Max relative violation of the per-user demand equalities.
double demand_violation(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg);

/// Analytic gradient of surrogate_objective.
Matrix subproblem_gradient(const RateAllocation& r, const SurrogateParams& params, const ChannelSet& ch,
                           const SystemConfig& cfg);

/// Minimizes surrogate_objective subject to the demand equalities and r >= 0
/// with a log-barrier Newton method. Entries flagged in `pinned` (same shape as
/// the rate matrix, nonzero = pinned) are held at zero. Throws
/// std::invalid_argument if the warm start is infeasible.
SubproblemResult solve_subproblem(const SurrogateParams& params, const ChannelSet& ch, const SystemConfig& cfg,
                                  const RateAllocation& warm_start, const SolverOptions& opts,
                                  const Matrix* pinned = nullptr);

/// Exact minimizer of transmission + decoding power with the active sets
/// fixed. Throws std::invalid_argument if some user has no active slot.
SubproblemResult solve_fixed_support(const SupportSets& supports, const SystemConfig& cfg, const ChannelSet& ch,
                                     const SolverOptions& opts);

/// Reweighted-ℓ1 / majorization-minimization joint clustering and rate allocation.
SolveReport jpcuc(const SystemConfig& cfg, const ChannelSet& ch, const SolverOptions& opts);

/// Fills powers, objective, supports and cap flag of `report` from `report.rates`.
void finalize_report(SolveReport& report, const SystemConfig& cfg, const ChannelSet& ch);

}  // namespace noma
