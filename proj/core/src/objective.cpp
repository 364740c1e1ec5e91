#include "noma/objective.hpp"

#include <cmath>

namespace noma {

double smoothed_l0(double x, double tau) { return std::log1p(x / tau) / std::log1p(1.0 / tau); }

double decoding_power(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg) {
    const double eps = cfg.epsilon_support();
    const Matrix& rv = r.values;
    double total = 0.0;
    for (std::size_t n = 0; n < rv.cols(); ++n) {
        double decoded = 0.0;  // Σ_{s≤j} r_s
        for (std::size_t j = 0; j < rv.rows(); ++j) {
            decoded += rv(j, n);
            if (rv(j, n) > eps) total += cfg.decoder_efficiency[ch.user_at(n, j)] * decoded;
        }
    }
    return total;
}

ObjectiveBreakdown total_power(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg) {
    const auto link = LinkParams::from(cfg);
    ObjectiveBreakdown out;
    for (std::size_t n = 0; n < r.values.cols(); ++n)
        out.transmission_w += subcarrier_sum_power(r.values.col(n), ch.ranked().col(n), link);
    out.decoding_w = decoding_power(r, ch, cfg);
    out.penalty = penalty_term(r, cfg, ExactL0{});
    out.total_w = out.transmission_w + out.decoding_w;
    return out;
}

namespace {

template <class Count>
double penalty_sum(const Matrix& rv, const SystemConfig& cfg, Count count) {
    const double denom = static_cast<double>(cfg.cluster_cap) + 0.5;
    double total = 0.0;
    for (std::size_t n = 0; n < rv.cols(); ++n) {
        double c = 0.0;
        for (std::size_t m = 0; m < rv.rows(); ++m) c += count(m, n, rv(m, n));
        total += std::pow(c / denom, cfg.penalty_exponent);
    }
    return total;
}

// (1 + x) ln(1 + x) - x, series near zero so the result stays nonnegative
double shifted_entropy(double x) {
    if (x < 1e-2) {
        double term = x * x;
        double sum = 0.0;
        for (int k = 2; k <= 8; ++k) {
            sum += ((k % 2 == 0) ? 1.0 : -1.0) * term / (k * (k - 1.0));
            term *= x;
        }
        return sum;
    }
    return (1.0 + x) * std::log1p(x) - x;
}

}  // namespace

double penalty_term(const RateAllocation& r, const SystemConfig& cfg, const PenaltyMode& mode) {
    const Matrix& rv = r.values;
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ExactL0>) {
                const double eps = cfg.epsilon_support();
                return penalty_sum(rv, cfg,
                                   [eps](std::size_t, std::size_t, double x) { return x > eps ? 1.0 : 0.0; });
            } else if constexpr (std::is_same_v<T, SmoothedL0>) {
                return penalty_sum(rv, cfg,
                                   [tau = m.tau](std::size_t, std::size_t, double x) { return smoothed_l0(x, tau); });
            } else {
                const SurrogateParams& p = *m.params;
                return penalty_sum(rv, cfg, [&p](std::size_t i, std::size_t n, double x) {
                    return p.w(i, n) * x + p.alpha(i, n);
                });
            }
        },
        mode);
}

double smoothed_objective(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg, double tau) {
    const auto link = LinkParams::from(cfg);
    const Matrix& rv = r.values;
    double total = 0.0;
    for (std::size_t n = 0; n < rv.cols(); ++n) {
        total += subcarrier_sum_power(rv.col(n), ch.ranked().col(n), link);
        double decoded = 0.0;
        for (std::size_t j = 0; j < rv.rows(); ++j) {
            decoded += rv(j, n);
            total += cfg.decoder_efficiency[ch.user_at(n, j)] * decoded * smoothed_l0(rv(j, n), tau);
        }
    }
    return total + penalty_term(r, cfg, SmoothedL0{tau});
}

SurrogateParams update_surrogate(const RateAllocation& anchor, double tau) {
    const Matrix& a = anchor.values;
    SurrogateParams p{Matrix(a.rows(), a.cols()), Matrix(a.rows(), a.cols()), anchor, tau};
    const double log_scale = std::log1p(1.0 / tau);
    for (std::size_t n = 0; n < a.cols(); ++n)
        for (std::size_t m = 0; m < a.rows(); ++m) {
            const double r = a(m, n);
            const double denom = (r + tau) * log_scale;
            p.w(m, n) = 1.0 / denom;
            // (r+τ) ln(1 + r/τ) - r = τ · shifted_entropy(r/τ)
            p.alpha(m, n) = tau * shifted_entropy(r / tau) / denom;
        }
    return p;
}

double bilinear_upper_bound(double r_s, double r_m, double r_s_anchor, double r_m_anchor, double w,
                            double alpha) {
    const double sum = r_s + r_m;
    const double diff_anchor = r_s_anchor - r_m_anchor;
    const double diff_step = (r_s - r_s_anchor) - (r_m - r_m_anchor);
    return 0.25 * w * (sum * sum - diff_anchor * diff_anchor - 2.0 * diff_anchor * diff_step) + alpha * r_s;
}

double surrogate_objective(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg,
                           const SurrogateParams& params) {
    const auto link = LinkParams::from(cfg);
    const Matrix& rv = r.values;
    const Matrix& at = params.anchor.values;
    double total = 0.0;
    for (std::size_t n = 0; n < rv.cols(); ++n) {
        total += subcarrier_sum_power(rv.col(n), ch.ranked().col(n), link);
        for (std::size_t j = 0; j < rv.rows(); ++j) {
            const double lambda = cfg.decoder_efficiency[ch.user_at(n, j)];
            if (lambda == 0.0) continue;
            double dec = 0.0;
            for (std::size_t s = 0; s <= j; ++s)
                dec += bilinear_upper_bound(rv(s, n), rv(j, n), at(s, n), at(j, n), params.w(j, n),
                                            params.alpha(j, n));
            total += lambda * dec;
        }
    }
    return total + penalty_term(r, cfg, LinearizedL0{&params});
}

}  // namespace noma
