#pragma once

#include <cstdint>
#include <vector>

#include "noma/config.hpp"
#include "noma/matrix.hpp"

namespace noma {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct DropGeometry {
    Point bs_position;
    std::vector<Point> user_positions;
    double area_side_m = 300.0;
};

/// Per-subcarrier ascending-gain ranking.
///
/// rank_of[n][u] is the 0-based rank of user u on subcarrier n (0 = weakest),
/// user_at[n][j] is the user holding rank j.
struct Ranking {
    std::vector<std::vector<std::size_t>> rank_of;
    std::vector<std::vector<std::size_t>> user_at;
};

/// Ascending order per column; equal gains keep the lower user index first.
Ranking rank_users(const Matrix& gains);

/// Channel power gains |h|² for every user and subcarrier, plus ranking.
///
/// Immutable after construction. gains() is user-indexed, ranked() is
/// rank-indexed (row j of column n belongs to user_at(n, j)).
class ChannelSet {
public:
    /// Throws std::invalid_argument if any gain is not strictly positive.
    explicit ChannelSet(Matrix gains);

    std::size_t num_users() const { return gains_.rows(); }
    std::size_t num_subcarriers() const { return gains_.cols(); }

    const Matrix& gains() const { return gains_; }
    const Matrix& ranked() const { return ranked_; }
    const Ranking& ranking() const { return ranking_; }

    std::size_t rank_of(std::size_t n, std::size_t user) const { return ranking_.rank_of[n][user]; }
    std::size_t user_at(std::size_t n, std::size_t rank) const { return ranking_.user_at[n][rank]; }

    friend bool operator==(const ChannelSet& a, const ChannelSet& b) { return a.gains_ == b.gains_; }

private:
    Matrix gains_;
    Matrix ranked_;
    Ranking ranking_;
};

/// 128.1 + 37.6 log10(d), d in km.
double path_loss_db(double distance_km);

/// Users uniform in the square of side cfg.channel.area_side_m centered on the BS.
DropGeometry generate_geometry(const SystemConfig& cfg, std::uint64_t seed);

/// Path loss + per-user log-normal shadowing + optional per-subcarrier
/// Rayleigh power fading. Pure function of its arguments. Throws
/// std::invalid_argument if a user sits on the BS or the geometry does not
/// match cfg.num_users.
ChannelSet generate_channels(const SystemConfig& cfg, const DropGeometry& geometry, std::uint64_t seed);

}  // namespace noma
