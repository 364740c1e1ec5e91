#pragma once

// Shared fixtures: seeded random drops and hand-built channels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "noma/channel.hpp"
#include "noma/config.hpp"
#include "noma/matrix.hpp"
#include "noma/transform.hpp"

namespace noma::test {

inline ChannelSet random_channels(const SystemConfig& cfg, std::uint64_t seed) {
    return generate_channels(cfg, generate_geometry(cfg, seed), seed);
}

/// Channel whose noise is 1 W per subcarrier at B = 1 MHz, so gains equal
/// SNR per watt and the small worked examples can be written directly.
inline SystemConfig unit_noise_config(std::size_t m, std::size_t n, double demand = 1.0, std::size_t cap = 2) {
    SystemConfig cfg = make_config(m, n, demand, cap);
    cfg.bandwidth_hz = 1e6;
    cfg.noise_psd_w_per_hz = 1e-6;
    return cfg;
}

/// Gains given per user (rows) and subcarrier (columns).
inline ChannelSet channels_from(std::size_t m, std::size_t n, const std::vector<double>& row_major) {
    Matrix g(m, n);
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t k = 0; k < n; ++k) g(u, k) = row_major[u * n + k];
    return ChannelSet(std::move(g));
}

/// Rate matrix with entries uniform in [0, hi] Mbit/s and a share of exact zeros.
inline Matrix random_rates(std::size_t m, std::size_t n, double hi, double zero_share, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix r(m, n);
    for (double& v : r.flat()) v = u(rng) < zero_share ? 0.0 : hi * u(rng);
    return r;
}

/// Strictly positive rates that meet every user's demand (random split).
inline Matrix random_feasible(const SystemConfig& cfg, const ChannelSet& ch, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Matrix r(cfg.num_users, cfg.num_subcarriers);
    for (std::size_t user = 0; user < cfg.num_users; ++user) {
        std::vector<double> w(cfg.num_subcarriers);
        double sum = 0.0;
        for (double& x : w) sum += (x = u(rng));
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n)
            r(ch.rank_of(n, user), n) = cfg.rate_demand[user] * w[n] / sum;
    }
    return r;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace noma::test
