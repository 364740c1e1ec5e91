#pragma once

// Log-barrier Newton engine shared by the surrogate and fixed-support solves.
//
// Problem shape: minimize f(r) subject to Σ_n r(rank_of(n,u), n) = R_u for
// every user u and r >= 0, with some entries pinned at zero. f must be convex
// with a Hessian that is block diagonal by subcarrier, so the KKT system is
// reduced to an M x M Schur complement on the demand multipliers.

#include <span>
#include <vector>

#include "noma/channel.hpp"
#include "noma/matrix.hpp"
#include "noma/solver.hpp"
#include "noma/transform.hpp"

namespace noma::detail {

class BlockObjective {
public:
    virtual ~BlockObjective() = default;
    virtual double value(const Matrix& r) const = 0;
    virtual void gradient(const Matrix& r, Matrix& g) const = 0;
    // Hessian of subcarrier n restricted to ranks `idx`, written row-major into h (k x k).
    virtual void hessian_block(const Matrix& r, std::size_t n, std::span<const std::size_t> idx,
                               std::span<double> h) const = 0;
};

struct BarrierResult {
    Matrix r;
    bool converged = false;
    std::size_t newton_iters = 0;
    double kkt_residual = 0.0;
    double objective = 0.0;
};

// `free_mask` has the shape of r; nonzero marks a free entry. r0 must be
// strictly positive on free entries, zero elsewhere, and satisfy the demands.
BarrierResult barrier_minimize(const BlockObjective& f, const ChannelSet& ch, std::span<const double> demand,
                               const Matrix& free_mask, Matrix r0, const SolverOptions& opts);

// Σ_{m≥j} (σ²/H_m - σ²/H_{m+1}) 2^{Σ_{s≤m} r_s/B} for every j of one subcarrier.
void transmission_tail_sums(std::span<const double> r_col, std::span<const double> ranked_gain,
                            const LinkParams& link, std::span<double> tail);

}  // namespace noma::detail
