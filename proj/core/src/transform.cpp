#include "noma/transform.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace noma {

namespace {

// 2^{x} - 1 without cancellation for small x
double exp2m1(double x) { return std::expm1(x * std::numbers::ln2); }

}  // namespace

void column_powers_to_rates(std::span<const double> p, std::span<const double> ranked_gain,
                            const LinkParams& link, std::span<double> r_out) {
    const std::size_t m = p.size();
    assert(ranked_gain.size() == m && r_out.size() == m);
    double stronger = 0.0;  // Σ_{l>j} p_l
    for (std::size_t jj = m; jj-- > 0;) {
        const double h = ranked_gain[jj];
        const double sinr = h * p[jj] / (h * stronger + link.noise_power_w);
        r_out[jj] = link.bandwidth_mhz * std::log1p(sinr) / std::numbers::ln2;
        stronger += p[jj];
    }
}

void column_rates_to_powers(std::span<const double> r, std::span<const double> ranked_gain,
                            const LinkParams& link, std::span<double> p_out) {
    const std::size_t m = r.size();
    assert(ranked_gain.size() == m && p_out.size() == m);
    double a_next = 0.0;  // a_{j+1}
    for (std::size_t jj = m; jj-- > 0;) {
        const double g = exp2m1(r[jj] / link.bandwidth_mhz);
        const double p = g * (a_next + link.noise_power_w / ranked_gain[jj]);
        p_out[jj] = p;
        a_next += p;
    }
}

double subcarrier_sum_power(std::span<const double> r_col, std::span<const double> ranked_gain,
                            const LinkParams& link) {
    const std::size_t m = r_col.size();
    assert(ranked_gain.size() == m);
    double total = 0.0;
    double cum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        cum += r_col[j] / link.bandwidth_mhz;
        const double next = (j + 1 < m) ? link.noise_power_w / ranked_gain[j + 1] : 0.0;
        const double coeff = link.noise_power_w / ranked_gain[j] - next;
        total += coeff * exp2m1(cum);
    }
    return total;
}

RateAllocation powers_to_rates(const PowerAllocation& p, const ChannelSet& ch, const SystemConfig& cfg) {
    const auto link = LinkParams::from(cfg);
    RateAllocation out{Matrix(p.values.rows(), p.values.cols())};
    for (std::size_t n = 0; n < p.values.cols(); ++n)
        column_powers_to_rates(p.values.col(n), ch.ranked().col(n), link, out.values.col(n));
    return out;
}

PowerAllocation rates_to_powers(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg) {
    const auto link = LinkParams::from(cfg);
    PowerAllocation out{Matrix(r.values.rows(), r.values.cols())};
    for (std::size_t n = 0; n < r.values.cols(); ++n)
        column_rates_to_powers(r.values.col(n), ch.ranked().col(n), link, out.values.col(n));
    return out;
}

bool nilpotent_inverse_check(std::span<const double> r_col, double bandwidth_mhz, double tol) {
    const std::size_t m = r_col.size();
    if (m == 0) return true;
    auto at = [m](std::vector<double>& a, std::size_t i, std::size_t j) -> double& { return a[i * m + j]; };
    auto matmul = [m](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> c(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                const double aik = a[i * m + k];
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < m; ++j) c[i * m + j] += aik * b[k * m + j];
            }
        return c;
    };

    std::vector<double> w(m * m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) at(w, i, i + 1) = std::exp2(r_col[i] / bandwidth_mhz);

    // S = I + W + ... + W^{M-1}; power ends as W^M
    std::vector<double> sum(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) at(sum, i, i) = 1.0;
    std::vector<double> power = sum;
    for (std::size_t l = 1; l <= m; ++l) {
        power = matmul(power, w);
        if (l < m)
            for (std::size_t k = 0; k < m * m; ++k) sum[k] += power[k];
    }
    for (double v : power)
        if (v != 0.0) return false;

    std::vector<double> i_minus_w(m * m, 0.0);
    for (std::size_t k = 0; k < m * m; ++k) i_minus_w[k] = -w[k];
    for (std::size_t i = 0; i < m; ++i) at(i_minus_w, i, i) += 1.0;
    const auto prod = matmul(i_minus_w, sum);

    // entry (i,j) of the product is S_ij - W_{i,i+1} S_{i+1,j}; rounding scales with those terms
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double expected = (i == j) ? 1.0 : 0.0;
            double scale = 1.0 + std::abs(sum[i * m + j]);
            if (i + 1 < m) scale += std::abs(w[i * m + i + 1] * sum[(i + 1) * m + j]);
            if (std::abs(prod[i * m + j] - expected) > tol * scale) return false;
        }
    return true;
}

std::vector<std::size_t> support(std::span<const double> vec, double eps) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < vec.size(); ++i)
        if (vec[i] > eps) idx.push_back(i);
    return idx;
}

}  // namespace noma
