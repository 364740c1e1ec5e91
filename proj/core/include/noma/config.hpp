#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace noma {

// Unit conventions used throughout the library:
//   rates        Mbit/s
//   bandwidth    Hz in configuration, MHz when dividing a rate (r / B is bit/s/Hz)
//   power        W
//   decoder λ    J/Mbit, so λ * rate is W

/// Raised for configuration invariants that do not hold.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ChannelModel {
    double area_side_m = 300.0;     // square drop area, BS at the center
    double shadowing_std_db = 4.0;  // log-normal shadowing, per user
    bool rayleigh_fading = true;    // unit-mean exponential power per user and subcarrier
};

struct SystemConfig {
    std::size_t num_users = 4;
    std::size_t num_subcarriers = 4;
    double bandwidth_hz = 1e6;
    double noise_psd_w_per_hz = 3.981071705534973e-21;  // -174 dBm/Hz
    std::vector<double> decoder_efficiency;              // J/Mbit, one per user
    std::vector<double> rate_demand;                     // Mbit/s, one per user
    std::size_t cluster_cap = 2;                         // L
    int penalty_exponent = 10;                           // K
    // τ = tau_factor * rate_scale(): a dimensionless factor on the per-slot demand.
    double tau_factor = 1e-3;
    // Rates at or below epsilon_factor * rate_scale() count as zero.
    double epsilon_factor = 1e-6;
    ChannelModel channel;

    double bandwidth_mhz() const { return bandwidth_hz * 1e-6; }
    /// σ² on one subcarrier, W.
    double noise_power_w() const { return noise_psd_w_per_hz * bandwidth_hz; }
    /// min_m R_m / N, the typical rate on one user/subcarrier slot.
    double rate_scale() const;
    double tau() const { return tau_factor * rate_scale(); }
    double epsilon_support() const { return epsilon_factor * rate_scale(); }
};

/// Config with M users, N subcarriers, uniform demand and λ = 0.01 J/Mbit.
SystemConfig make_config(std::size_t num_users, std::size_t num_subcarriers, double rate_demand_mbps,
                         std::size_t cluster_cap = 2);

/// Returns `cfg` unchanged if every invariant holds; throws ConfigError naming
/// the first violation otherwise.
SystemConfig validate_config(const SystemConfig& cfg);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_w(double dbm) { return db_to_linear(dbm - 30.0); }
inline double w_to_dbm(double w) { return linear_to_db(w) + 30.0; }

}  // namespace noma
