#include <gtest/gtest.h>

#include "noma/config.hpp"

namespace noma {
namespace {

std::string violation(const SystemConfig& cfg) {
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

TEST(ValidateConfig, AcceptsSmallValidConfig) {
    SystemConfig cfg = make_config(2, 1, 1.0, 1);
    cfg.penalty_exponent = 10;
    EXPECT_NO_THROW(validate_config(cfg));
}

TEST(ValidateConfig, RejectsZeroClusterCap) {
    EXPECT_EQ(violation(make_config(2, 1, 1.0, 0)), "cluster cap below 1");
}

TEST(ValidateConfig, RejectsZeroDemand) {
    SystemConfig cfg = make_config(2, 1, 1.0, 1);
    cfg.rate_demand[0] = 0.0;
    EXPECT_EQ(violation(cfg), "nonpositive rate demand");
}

TEST(ValidateConfig, NamesFirstViolationOnly) {
    SystemConfig cfg = make_config(2, 1, 1.0, 0);
    cfg.rate_demand[0] = -1.0;
    EXPECT_EQ(violation(cfg), "cluster cap below 1");
}

TEST(ValidateConfig, RejectsMismatchedVectors) {
    SystemConfig cfg = make_config(3, 2, 1.0);
    cfg.decoder_efficiency.pop_back();
    EXPECT_EQ(violation(cfg), "decoder efficiency has 2 entries, expected 3");
}

TEST(ValidateConfig, RejectsCapAboveUserCount) {
    EXPECT_EQ(violation(make_config(2, 2, 1.0, 3)), "cluster cap exceeds number of users");
}

TEST(ValidateConfig, RejectsNonFiniteDemand) {
    SystemConfig cfg = make_config(2, 2, 1.0);
    cfg.rate_demand[1] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_EQ(violation(cfg), "nonpositive rate demand");
}

TEST(SystemConfig, DerivedScales) {
    SystemConfig cfg = make_config(3, 4, 8.0);
    cfg.rate_demand[2] = 4.0;
    EXPECT_DOUBLE_EQ(cfg.rate_scale(), 1.0);
    EXPECT_DOUBLE_EQ(cfg.tau(), 1e-3);
    EXPECT_DOUBLE_EQ(cfg.epsilon_support(), 1e-6);
    EXPECT_DOUBLE_EQ(cfg.bandwidth_mhz(), 1.0);
    // -174 dBm/Hz over 1 MHz is -114 dBm
    EXPECT_NEAR(w_to_dbm(cfg.noise_power_w()), -114.0, 1e-9);
}

TEST(Units, DecibelConversions) {
    EXPECT_DOUBLE_EQ(dbm_to_w(30.0), 1.0);
    EXPECT_NEAR(dbm_to_w(0.0), 1e-3, 1e-18);
    EXPECT_NEAR(linear_to_db(db_to_linear(-90.5)), -90.5, 1e-12);
}

}  // namespace
}  // namespace noma
