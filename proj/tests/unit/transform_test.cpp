#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "noma/transform.hpp"
#include "test_util.hpp"

namespace noma {
namespace {

using test::channels_from;
using test::unit_noise_config;

// Reference powers from the SIC equations written as a dense linear system,
//   p_m - (2^{r_m/B} - 1) Σ_{l>m} p_l = (2^{r_m/B} - 1) σ²/H_m,
// solved by Gaussian elimination with partial pivoting.
std::vector<double> dense_sic_powers(std::span<const double> r, std::span<const double> h, double sigma2,
                                     double b_mhz) {
    const std::size_t m = r.size();
    std::vector<double> a(m * m, 0.0), rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = std::exp2(r[i] / b_mhz) - 1.0;
        a[i * m + i] = 1.0;
        for (std::size_t l = i + 1; l < m; ++l) a[i * m + l] = -d;
        rhs[i] = d * sigma2 / h[i];
    }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t i = c + 1; i < m; ++i)
            if (std::abs(a[i * m + c]) > std::abs(a[piv * m + c])) piv = i;
        for (std::size_t k = 0; k < m; ++k) std::swap(a[c * m + k], a[piv * m + k]);
        std::swap(rhs[c], rhs[piv]);
        for (std::size_t i = c + 1; i < m; ++i) {
            const double f = a[i * m + c] / a[c * m + c];
            for (std::size_t k = c; k < m; ++k) a[i * m + k] -= f * a[c * m + k];
            rhs[i] -= f * rhs[c];
        }
    }
    std::vector<double> p(m);
    for (std::size_t i = m; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t k = i + 1; k < m; ++k) s -= a[i * m + k] * p[k];
        p[i] = s / a[i * m + i];
    }
    return p;
}

TEST(PowersToRates, ZeroPowerZeroRate) {
    const auto cfg = unit_noise_config(2, 2);
    const auto ch = channels_from(2, 2, {1.0, 3.0, 4.0, 2.0});
    const auto r = powers_to_rates(PowerAllocation{Matrix(2, 2)}, ch, cfg);
    for (double v : r.values.flat()) EXPECT_EQ(v, 0.0);
}

TEST(PowersToRates, SingleUserShannon) {
    const auto cfg = unit_noise_config(1, 1);
    const auto ch = channels_from(1, 1, {2.0});
    const auto r = powers_to_rates(PowerAllocation{Matrix(1, 1, 1.5)}, ch, cfg);
    EXPECT_NEAR(r.values(0, 0), 2.0, 1e-15);
}

TEST(PowersToRates, TwoUserSic) {
    const auto cfg = unit_noise_config(2, 1);
    const auto ch = channels_from(2, 1, {1.0, 4.0});
    Matrix p(2, 1);
    p(0, 0) = 1.25;
    p(1, 0) = 0.25;
    const auto r = powers_to_rates(PowerAllocation{p}, ch, cfg);
    EXPECT_NEAR(r.values(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(r.values(1, 0), 1.0, 1e-15);
}

TEST(RatesToPowers, ZeroRateExactlyZeroPower) {
    const auto cfg = make_config(4, 3, 1.0);
    const auto ch = test::random_channels(cfg, 3);
    const auto p = rates_to_powers(RateAllocation{Matrix(4, 3)}, ch, cfg);
    for (double v : p.values.flat()) EXPECT_EQ(v, 0.0);
}

TEST(RatesToPowers, TwoUserSic) {
    const auto cfg = unit_noise_config(2, 1);
    const auto ch = channels_from(2, 1, {1.0, 4.0});
    const auto p = rates_to_powers(RateAllocation{Matrix(2, 1, 1.0)}, ch, cfg);
    EXPECT_NEAR(p.values(0, 0), 1.25, 1e-15);
    EXPECT_NEAR(p.values(1, 0), 0.25, 1e-15);
}

TEST(RatesToPowers, RankIndexingFollowsGainOrder) {
    // user 0 is the stronger one, so it holds rank 1
    const auto cfg = unit_noise_config(2, 1);
    const auto ch = channels_from(2, 1, {4.0, 1.0});
    const auto p = rates_to_powers(RateAllocation{Matrix(2, 1, 1.0)}, ch, cfg);
    EXPECT_NEAR(p.values(0, 0), 1.25, 1e-15);
    EXPECT_NEAR(p.values(1, 0), 0.25, 1e-15);
}

TEST(RatesToPowers, MatchesDenseSicSystem) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + trial % 6;
        const auto cfg = make_config(m, 2, 1.0, 1);
        const auto ch = test::random_channels(cfg, 100 + trial);
        const Matrix r = test::random_rates(m, 2, 6.0, 0.25, rng);
        const auto p = rates_to_powers(RateAllocation{r}, ch, cfg);
        for (std::size_t n = 0; n < 2; ++n) {
            const auto ref = dense_sic_powers(r.col(n), ch.ranked().col(n), cfg.noise_power_w(), cfg.bandwidth_mhz());
            for (std::size_t j = 0; j < m; ++j) EXPECT_LE(test::rel_diff(p.values(j, n), ref[j]), 1e-12);
        }
    }
}

TEST(RatesToPowers, RoundTripAndSupport) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 1 + trial % 6, n = 1 + (trial / 6) % 6;
        const auto cfg = make_config(m, n, 1.0, 1);
        const auto ch = test::random_channels(cfg, trial);
        const Matrix r = test::random_rates(m, n, 8.0, 0.3, rng);
        const auto p = rates_to_powers(RateAllocation{r}, ch, cfg);
        const auto back = powers_to_rates(p, ch, cfg);
        for (std::size_t i = 0; i < r.size(); ++i) {
            EXPECT_LE(test::rel_diff(back.values.flat()[i], r.flat()[i]), 1e-9);
            EXPECT_EQ(p.values.flat()[i] > 0.0, r.flat()[i] > 0.0);
        }
    }
}

TEST(SubcarrierSumPower, ZeroColumn) {
    const std::vector<double> r{0.0, 0.0, 0.0}, h{1.0, 2.0, 5.0};
    EXPECT_EQ(subcarrier_sum_power(r, h, LinkParams{1.0, 1.0}), 0.0);
}

TEST(SubcarrierSumPower, TwoUserExample) {
    const std::vector<double> r{1.0, 1.0}, h{1.0, 4.0};
    EXPECT_NEAR(subcarrier_sum_power(r, h, LinkParams{1.0, 1.0}), 1.5, 1e-15);
}

TEST(SubcarrierSumPower, MatchesColumnSum) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cfg = make_config(3, 1, 1.0, 1);
        const auto ch = test::random_channels(cfg, trial);
        const Matrix r = test::random_rates(3, 1, 6.0, 0.2, rng);
        const auto p = rates_to_powers(RateAllocation{r}, ch, cfg);
        const double sum = p.values(0, 0) + p.values(1, 0) + p.values(2, 0);
        EXPECT_LE(test::rel_diff(subcarrier_sum_power(r.col(0), ch.ranked().col(0), LinkParams::from(cfg)), sum), 1e-12);
    }
}

TEST(SubcarrierSumPower, StrictlyIncreasingInEveryRate) {
    std::mt19937_64 rng(14);
    const LinkParams link{1.0, 1.0};
    const std::vector<double> h{0.5, 1.0, 3.0, 7.0};
    for (int trial = 0; trial < 100; ++trial) {
        Matrix r = test::random_rates(4, 1, 3.0, 0.3, rng);
        const double base = subcarrier_sum_power(r.col(0), h, link);
        for (std::size_t j = 0; j < 4; ++j) {
            Matrix up = r;
            up(j, 0) += 1e-3;
            EXPECT_GT(subcarrier_sum_power(up.col(0), h, link), base);
        }
    }
}

TEST(NilpotentInverse, TwoByTwo) {
    const std::vector<double> r{1.0, 0.3};
    EXPECT_TRUE(nilpotent_inverse_check(r, 1.0));
}

TEST(NilpotentInverse, ZeroRates) {
    for (std::size_t m = 1; m <= 8; ++m) EXPECT_TRUE(nilpotent_inverse_check(std::vector<double>(m, 0.0), 1.0));
}

TEST(NilpotentInverse, RandomColumns) {
    std::mt19937_64 rng(15);
    for (std::size_t m = 1; m <= 8; ++m)
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix r = test::random_rates(m, 1, 4.0, 0.2, rng);
            EXPECT_TRUE(nilpotent_inverse_check(r.col(0), 1.0)) << "M=" << m;
        }
}

TEST(Support, PicksEntriesAboveThreshold) {
    EXPECT_EQ(support(std::vector<double>{0.0, 5.0, 0.0}, 1e-6), (std::vector<std::size_t>{1}));
    EXPECT_TRUE(support(std::vector<double>{0.0, 0.0}, 1e-6).empty());
    EXPECT_TRUE(support(std::vector<double>{1e-6}, 1e-6).empty());
}

}  // namespace
}  // namespace noma
