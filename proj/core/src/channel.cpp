#include "noma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace noma {

Ranking rank_users(const Matrix& gains) {
    const std::size_t m = gains.rows();
    const std::size_t n_sc = gains.cols();
    Ranking out;
    out.rank_of.assign(n_sc, std::vector<std::size_t>(m));
    out.user_at.assign(n_sc, std::vector<std::size_t>(m));
    for (std::size_t n = 0; n < n_sc; ++n) {
        auto& order = out.user_at[n];
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto column = gains.col(n);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
        for (std::size_t j = 0; j < m; ++j) out.rank_of[n][order[j]] = j;
    }
    return out;
}

ChannelSet::ChannelSet(Matrix gains) : gains_(std::move(gains)) {
    for (double g : gains_.flat())
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("channel gains must be finite and strictly positive");
    ranking_ = rank_users(gains_);
    ranked_ = Matrix(gains_.rows(), gains_.cols());
    for (std::size_t n = 0; n < gains_.cols(); ++n)
        for (std::size_t j = 0; j < gains_.rows(); ++j)
            ranked_(j, n) = gains_(ranking_.user_at[n][j], n);
}

double path_loss_db(double distance_km) {
    if (!(distance_km > 0.0)) throw std::invalid_argument("distance to the BS must be positive");
    return 128.1 + 37.6 * std::log10(distance_km);
}

namespace {

// Geometry and fading draw from separate engines so that toggling fading
// leaves the user drop unchanged.
constexpr std::uint64_t kGeometryStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kFadingStream = 0xc2b2ae3d27d4eb4fULL;

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

DropGeometry generate_geometry(const SystemConfig& cfg, std::uint64_t seed) {
    auto rng = make_engine(seed, kGeometryStream);
    const double half = 0.5 * cfg.channel.area_side_m;
    std::uniform_real_distribution<double> coord(-half, half);
    DropGeometry g;
    g.area_side_m = cfg.channel.area_side_m;
    g.user_positions.reserve(cfg.num_users);
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        Point p{coord(rng), coord(rng)};
        // resample the measure-zero case of landing on the BS
        while (p.x == 0.0 && p.y == 0.0) p = {coord(rng), coord(rng)};
        g.user_positions.push_back(p);
    }
    return g;
}

ChannelSet generate_channels(const SystemConfig& cfg, const DropGeometry& geometry, std::uint64_t seed) {
    if (geometry.user_positions.size() != cfg.num_users)
        throw std::invalid_argument("geometry does not match the number of users");
    auto rng = make_engine(seed, kFadingStream);
    std::normal_distribution<double> shadow(0.0, 1.0);
    std::exponential_distribution<double> rayleigh_power(1.0);

    Matrix gains(cfg.num_users, cfg.num_subcarriers);
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        const auto& p = geometry.user_positions[u];
        const double d_km = std::hypot(p.x - geometry.bs_position.x, p.y - geometry.bs_position.y) / 1000.0;
        const double loss_db = path_loss_db(d_km) + cfg.channel.shadowing_std_db * shadow(rng);
        const double large_scale = db_to_linear(-loss_db);
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) {
            double fading = 1.0;
            if (cfg.channel.rayleigh_fading)
                do fading = rayleigh_power(rng);
                while (!(fading > 0.0));
            gains(u, n) = large_scale * fading;
        }
    }
    return ChannelSet(std::move(gains));
}

}  // namespace noma
