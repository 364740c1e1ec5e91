#include "noma/config.hpp"

#include <algorithm>
#include <sstream>

namespace noma {

double SystemConfig::rate_scale() const {
    if (rate_demand.empty() || num_subcarriers == 0) return 1.0;
    return *std::min_element(rate_demand.begin(), rate_demand.end()) /
           static_cast<double>(num_subcarriers);
}

SystemConfig make_config(std::size_t num_users, std::size_t num_subcarriers, double rate_demand_mbps,
                         std::size_t cluster_cap) {
    SystemConfig cfg;
    cfg.num_users = num_users;
    cfg.num_subcarriers = num_subcarriers;
    cfg.rate_demand.assign(num_users, rate_demand_mbps);
    cfg.decoder_efficiency.assign(num_users, 0.01);
    cfg.cluster_cap = cluster_cap;
    return cfg;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

}  // namespace

SystemConfig validate_config(const SystemConfig& cfg) {
    if (cfg.num_users < 1) fail("number of users below 1");
    if (cfg.num_subcarriers < 1) fail("number of subcarriers below 1");
    if (cfg.cluster_cap < 1) fail("cluster cap below 1");
    if (cfg.cluster_cap > cfg.num_users) fail("cluster cap exceeds number of users");
    if (cfg.penalty_exponent < 1) fail("penalty exponent below 1");
    if (cfg.rate_demand.size() != cfg.num_users) {
        std::ostringstream os;
        os << "rate demand has " << cfg.rate_demand.size() << " entries, expected " << cfg.num_users;
        fail(os.str());
    }
    if (cfg.decoder_efficiency.size() != cfg.num_users) {
        std::ostringstream os;
        os << "decoder efficiency has " << cfg.decoder_efficiency.size() << " entries, expected "
           << cfg.num_users;
        fail(os.str());
    }
    for (double r : cfg.rate_demand)
        if (!(r > 0.0) || !std::isfinite(r)) fail("nonpositive rate demand");
    for (double l : cfg.decoder_efficiency)
        if (!(l >= 0.0) || !std::isfinite(l)) fail("negative decoder efficiency");
    if (!(cfg.bandwidth_hz > 0.0)) fail("nonpositive bandwidth");
    if (!(cfg.noise_power_w() > 0.0)) fail("nonpositive noise power");
    if (!(cfg.tau_factor > 0.0)) fail("nonpositive reweighting tau");
    if (!(cfg.epsilon_factor >= 0.0)) fail("negative support threshold");
    if (!(cfg.channel.area_side_m > 0.0)) fail("nonpositive area side");
    if (!(cfg.channel.shadowing_std_db >= 0.0)) fail("negative shadowing deviation");
    return cfg;
}

}  // namespace noma
