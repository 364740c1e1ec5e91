#include <gtest/gtest.h>

#include <cmath>

#include "noma/channel.hpp"
#include "noma/config_io.hpp"
#include "json.hpp"

namespace noma {
namespace {

TEST(ParseExperiment, EmptyObjectKeepsDefaults) {
    const auto defaults = desk_preset();
    const auto spec = parse_experiment("{}", defaults);
    EXPECT_EQ(dump_experiment(spec), dump_experiment(defaults));
}

TEST(ParseExperiment, OverridesFields) {
    const auto spec = parse_experiment(R"({
        "system": {"num_users": 3, "num_subcarriers": 5, "rate_demand_mbps": [1, 2, 3],
                   "decoder_efficiency_j_per_mbit": 0.02, "noise_psd_dbm_per_hz": -170,
                   "channel": {"rayleigh_fading": false}},
        "solver": {"tau_schedule": "geometric_decay", "outer_max_iters": 7},
        "sweep": {"axis": "cluster_cap", "values": [1, 2, 3]},
        "num_drops": 4, "base_seed": 99, "solvers": ["oracle", "oma"],
        "output_dir": "out/x", "threads": 2
    })",
                                       desk_preset());
    EXPECT_EQ(spec.base.num_users, 3u);
    EXPECT_EQ(spec.base.num_subcarriers, 5u);
    EXPECT_EQ(spec.base.rate_demand, (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(spec.base.decoder_efficiency, std::vector<double>(3, 0.02));
    EXPECT_NEAR(spec.base.noise_psd_w_per_hz, 1e-3 * std::pow(10.0, -17.0), 1e-12 * 1e-20);
    EXPECT_FALSE(spec.base.channel.rayleigh_fading);
    EXPECT_EQ(spec.options.tau_schedule, TauSchedule::GeometricDecay);
    EXPECT_EQ(spec.options.outer_max_iters, 7u);
    EXPECT_EQ(spec.axis, SweepAxis::ClusterCap);
    EXPECT_EQ(spec.values, (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(spec.num_drops, 4u);
    EXPECT_EQ(spec.base_seed, 99u);
    EXPECT_EQ(spec.solvers, (std::vector<SolverKind>{SolverKind::Oracle, SolverKind::Oma}));
    EXPECT_EQ(spec.output_dir, "out/x");
    EXPECT_EQ(spec.threads, 2u);
    EXPECT_NO_THROW(validate_experiment(spec));
}

TEST(ParseExperiment, ScalarDemandSpreadsToAllUsers) {
    const auto spec = parse_experiment(R"({"system": {"num_users": 6, "rate_demand_mbps": 2.5}})", desk_preset());
    EXPECT_EQ(spec.base.rate_demand, std::vector<double>(6, 2.5));
    EXPECT_EQ(spec.base.decoder_efficiency.size(), 6u);
}

TEST(ParseExperiment, ListOfWrongLengthFailsValidation) {
    const auto spec = parse_experiment(R"({"system": {"num_users": 3, "rate_demand_mbps": [1, 2]}})", desk_preset());
    EXPECT_THROW(validate_config(spec.base), ConfigError);
}

TEST(ParseExperiment, RejectsUnknownKeysAndBadTypes) {
    const auto d = desk_preset();
    EXPECT_THROW(parse_experiment(R"({"num_drop": 3})", d), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"system": {"users": 3}})", d), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"system": {"channel": {"fading": true}}})", d), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"solver": {"tau": 1}})", d), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"sweep": {"axis": "power"}})", d), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"num_drops": -1})", d), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"num_drops": "ten"})", d), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"solvers": ["fast"]})", d), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"solver": {"tau_schedule": "linear"}})", d), ConfigError);
    EXPECT_THROW(parse_experiment("{ not json", d), ConfigError);
    EXPECT_THROW(parse_experiment("[1, 2]", d), ConfigError);
}

TEST(DumpExperiment, RoundTrips) {
    auto spec = paper_preset();
    spec.base.noise_psd_w_per_hz = dbm_to_w(-171.3);
    spec.base.rate_demand = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10.5};
    spec.options.tau_schedule = TauSchedule::GeometricDecay;
    spec.threads = 3;
    const auto back = parse_experiment(dump_experiment(spec), ExperimentSpec{});
    EXPECT_NEAR(back.base.noise_psd_w_per_hz, spec.base.noise_psd_w_per_hz, 1e-12 * spec.base.noise_psd_w_per_hz);
    EXPECT_EQ(back.base.rate_demand, spec.base.rate_demand);
    EXPECT_EQ(back.values, spec.values);
    EXPECT_EQ(back.solvers, spec.solvers);
    EXPECT_EQ(back.options.tau_schedule, spec.options.tau_schedule);
    EXPECT_EQ(back.threads, 3u);
    EXPECT_EQ(dump_experiment(back), dump_experiment(spec));
}

TEST(ReportToJson, UserIndexedRatesAndNullForInfinity) {
    const auto cfg = make_config(3, 2, 2.0, 2);
    const auto ch = generate_channels(cfg, generate_geometry(cfg, 3), 3);
    const auto rep = jpcuc(cfg, ch, SolverOptions{});
    const auto j = nlohmann::json::parse(report_to_json(rep, ch));
    ASSERT_EQ(j["rates_mbps"].size(), 3u);
    for (std::size_t u = 0; u < 3; ++u)
        for (std::size_t n = 0; n < 2; ++n) {
            EXPECT_EQ(j["rates_mbps"][u][n].get<double>(), rep.rates.values(ch.rank_of(n, u), n));
            EXPECT_EQ(j["powers_w"][u][n].get<double>(), rep.powers.values(ch.rank_of(n, u), n));
        }
    for (std::size_t n = 0; n < 2; ++n)
        for (const auto& user : j["active_users_per_subcarrier"][n])
            EXPECT_GT(j["rates_mbps"][user.get<std::size_t>()][n].get<double>(), 0.0);
    EXPECT_EQ(j["power_total_w"].get<double>(), rep.objective.total_w);

    SolveReport infeasible;
    infeasible.objective.total_w = std::numeric_limits<double>::infinity();
    EXPECT_NE(report_to_json(infeasible, ch).find("\"power_total_w\": null"), std::string::npos);
}

}  // namespace
}  // namespace noma
