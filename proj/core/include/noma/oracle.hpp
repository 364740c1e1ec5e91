#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>

#include "noma/channel.hpp"
#include "noma/config.hpp"
#include "noma/solver.hpp"

namespace noma {

/// Thrown when exhaustive enumeration would exceed the configured budget.
class EnumerationBudgetError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// (Σ_{k≤L} C(M,k))^N, saturating at SIZE_MAX.
std::size_t candidate_pattern_count(std::size_t num_users, std::size_t num_subcarriers, std::size_t cluster_cap);

/// Streams every clustering: per subcarrier a set of at most L ranks, keeping
/// only patterns in which every user is active somewhere. `ranking` maps ranks
/// to users; without it rank j is user j. Patterns arrive in lexicographic
/// order (subcarrier 0 most significant, subsets compared as sorted sequences).
void enumerate_supports(std::size_t num_users, std::size_t num_subcarriers, std::size_t cluster_cap,
                        const std::function<void(const SupportSets&)>& visit, const Ranking* ranking = nullptr,
                        std::size_t budget = 1'000'000);

/// Global optimum of the clustered power minimization by exhaustive search
/// over supports with an exact fixed-support solve for each. report.feasible
/// is false (and the total infinite) when no pattern covers all users.
SolveReport oracle_optimum(const SystemConfig& cfg, const ChannelSet& ch, const SolverOptions& opts);

/// One user per subcarrier: the exact oracle at L = 1 when within budget,
/// otherwise jpcuc at L = 1. report.method says which.
SolveReport oma_baseline(const SystemConfig& cfg, const ChannelSet& ch, const SolverOptions& opts);

}  // namespace noma
