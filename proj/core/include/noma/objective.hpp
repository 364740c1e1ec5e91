#pragma once

#include <variant>

#include "noma/channel.hpp"
#include "noma/config.hpp"
#include "noma/transform.hpp"

namespace noma {

/// Power split of an allocation. total_w = transmission_w + decoding_w;
/// the exact ℓ0 penalty is reported alongside but never added to total_w.
struct ObjectiveBreakdown {
    double transmission_w = 0.0;
    double decoding_w = 0.0;
    double penalty = 0.0;
    double total_w = 0.0;
};

/// Linearization of the smoothed ℓ0 count around an anchor allocation:
///   ln(1 + r/τ) / ln(1 + 1/τ)  <=  w r + α,   equality at r = anchor.
struct SurrogateParams {
    Matrix w;
    Matrix alpha;
    RateAllocation anchor;
    double tau = 1.0;
};

/// ln(1 + x/τ) / ln(1 + 1/τ); tends to the 0/1 indicator of x > 0 as τ -> 0.
double smoothed_l0(double x, double tau);

/// Σ_n Σ_{j active} λ_{user(j,n)} Σ_{s≤j} r_{sn}, with "active" meaning r_{jn} > ε.
double decoding_power(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg);

/// Physical transmit power (telescoped closed form per subcarrier) plus
/// decoding power; penalty is the exact ℓ0 penalty.
ObjectiveBreakdown total_power(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg);

struct ExactL0 {};
struct SmoothedL0 {
    double tau;
};
struct LinearizedL0 {
    const SurrogateParams* params;
};
using PenaltyMode = std::variant<ExactL0, SmoothedL0, LinearizedL0>;

/// Σ_n (count_n / (L + 0.5))^K where count_n is the ε-support size, its
/// smoothed version, or Σ_m (w r + α), depending on `mode`.
double penalty_term(const RateAllocation& r, const SystemConfig& cfg, const PenaltyMode& mode);

/// Objective with every ℓ0 replaced by smoothed_l0: transmission + smoothed
/// decoding + smoothed penalty. This is the quantity the outer loop descends.
double smoothed_objective(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg, double tau);

SurrogateParams update_surrogate(const RateAllocation& anchor, double tau);

/// Convex upper bound on r_s (w r_m + α) obtained by writing the product as
/// a difference of squares and linearizing -(r_s - r_m)² at the anchor.
double bilinear_upper_bound(double r_s, double r_m, double r_s_anchor, double r_m_anchor, double w,
                            double alpha);

/// Convex majorizer of smoothed_objective, tight at params.anchor.
double surrogate_objective(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg,
                           const SurrogateParams& params);

}  // namespace noma
