#pragma once

#include <span>
#include <vector>

#include "noma/channel.hpp"
#include "noma/config.hpp"
#include "noma/matrix.hpp"

namespace noma {

/// M x N rates in Mbit/s. Row j of column n is the rank-j user on subcarrier n.
struct RateAllocation {
    Matrix values;
};

/// M x N transmit powers in W, same rank/subcarrier indexing as RateAllocation.
struct PowerAllocation {
    Matrix values;
};

/// Physical-layer constants of one subcarrier, as the transform needs them.
struct LinkParams {
    double noise_power_w = 1.0;   // σ²
    double bandwidth_mhz = 1.0;   // B, with rates in Mbit/s

    static LinkParams from(const SystemConfig& cfg) { return {cfg.noise_power_w(), cfg.bandwidth_mhz()}; }
};

// SIC achievable rates on one subcarrier from ranked gains and powers.
void column_powers_to_rates(std::span<const double> p, std::span<const double> ranked_gain,
                            const LinkParams& link, std::span<double> r_out);

// Inverse map via the backward recursion a_m = 2^{r_m/B} a_{m+1} + σ²/H_m (2^{r_m/B} - 1),
// p_m = a_m - a_{m+1}. Zero rate gives exactly zero power.
void column_rates_to_powers(std::span<const double> r, std::span<const double> ranked_gain,
                            const LinkParams& link, std::span<double> p_out);

/// Total transmit power on one subcarrier,
///   Σ_m (σ²/H_m - σ²/H_{m+1}) 2^{Σ_{s≤m} r_s/B} - σ²/H_1,  with σ²/H_{M+1} = 0,
/// evaluated as Σ_m (σ²/H_m - σ²/H_{m+1}) (2^{Σ_{s≤m} r_s/B} - 1) so that the
/// telescoped constant cancels exactly.
double subcarrier_sum_power(std::span<const double> r_col, std::span<const double> ranked_gain,
                            const LinkParams& link);

RateAllocation powers_to_rates(const PowerAllocation& p, const ChannelSet& ch, const SystemConfig& cfg);
PowerAllocation rates_to_powers(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg);

/// Builds the superdiagonal matrix W with W_{m,m+1} = 2^{r_m/B} and checks
/// W^M = 0 and (I - W)(I + W + ... + W^{M-1}) = I elementwise (tolerance
/// scaled by the magnitude of the entries involved).
bool nilpotent_inverse_check(std::span<const double> r_col, double bandwidth_mhz, double tol = 1e-10);

/// Indices i with vec[i] > eps.
std::vector<std::size_t> support(std::span<const double> vec, double eps);

}  // namespace noma
