#pragma once

// Block objectives handed to the barrier engine: the convex surrogate solved
// each outer iteration and the exact objective for a frozen support.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "barrier.hpp"
#include "noma/objective.hpp"

namespace noma::detail {

// Shared exponential transmission part: gradient (ln2/B) T_j and Hessian (ln2/B)² T_max(j,k).
class TransmissionPart {
public:
    TransmissionPart(const ChannelSet& ch, const SystemConfig& cfg)
        : ch_(ch), link_(LinkParams::from(cfg)), tail_(cfg.num_users) {}

    double value(const Matrix& r) const {
        double v = 0.0;
        for (std::size_t n = 0; n < r.cols(); ++n) v += subcarrier_sum_power(r.col(n), ch_.ranked().col(n), link_);
        return v;
    }

    void add_gradient(const Matrix& r, Matrix& g) const {
        const double k = std::numbers::ln2 / link_.bandwidth_mhz;
        for (std::size_t n = 0; n < r.cols(); ++n) {
            transmission_tail_sums(r.col(n), ch_.ranked().col(n), link_, tail_);
            for (std::size_t j = 0; j < r.rows(); ++j) g(j, n) += k * tail_[j];
        }
    }

    void hessian_block(const Matrix& r, std::size_t n, std::span<const std::size_t> idx, std::span<double> h) const {
        const double k = std::numbers::ln2 / link_.bandwidth_mhz;
        transmission_tail_sums(r.col(n), ch_.ranked().col(n), link_, tail_);
        const std::size_t sz = idx.size();
        for (std::size_t a = 0; a < sz; ++a)
            for (std::size_t b = 0; b < sz; ++b) h[a * sz + b] = k * k * tail_[std::max(idx[a], idx[b])];
    }

private:
    const ChannelSet& ch_;
    LinkParams link_;
    mutable std::vector<double> tail_;
};

class SurrogateModel final : public detail::BlockObjective {
public:
    SurrogateModel(const SurrogateParams& params, const ChannelSet& ch, const SystemConfig& cfg)
        : params_(params), ch_(ch), cfg_(cfg), tx_(ch, cfg),
          scale_(1.0 / std::pow(static_cast<double>(cfg.cluster_cap) + 0.5, cfg.penalty_exponent)) {}

    double value(const Matrix& r) const override { return surrogate_objective(RateAllocation{r}, ch_, cfg_, params_); }

    void gradient(const Matrix& r, Matrix& g) const override {
        g.fill(0.0);
        tx_.add_gradient(r, g);
        const Matrix& at = params_.anchor.values;
        const int kexp = cfg_.penalty_exponent;
        for (std::size_t n = 0; n < r.cols(); ++n) {
            for (std::size_t j = 0; j < r.rows(); ++j) {
                const double lambda = cfg_.decoder_efficiency[ch_.user_at(n, j)];
                if (lambda == 0.0) continue;
                const double w = params_.w(j, n);
                const double alpha = params_.alpha(j, n);
                for (std::size_t s = 0; s <= j; ++s) {
                    const double sum = r(s, n) + r(j, n);
                    const double d_anchor = at(s, n) - at(j, n);
                    g(s, n) += lambda * (0.5 * w * (sum - d_anchor) + alpha);
                    g(j, n) += lambda * (0.5 * w * (sum + d_anchor));
                }
            }
            const double z = linear_count(r, n);
            const double dpen = kexp == 1 ? scale_ : scale_ * kexp * std::pow(z, kexp - 1);
            for (std::size_t j = 0; j < r.rows(); ++j) g(j, n) += dpen * params_.w(j, n);
        }
    }

    void hessian_block(const Matrix& r, std::size_t n, std::span<const std::size_t> idx,
                       std::span<double> h) const override {
        tx_.hessian_block(r, n, idx, h);
        const std::size_t sz = idx.size();
        // position of rank j inside idx, or npos when pinned
        pos_.assign(r.rows(), npos);
        for (std::size_t a = 0; a < sz; ++a) pos_[idx[a]] = a;
        for (std::size_t j = 0; j < r.rows(); ++j) {
            const double lambda = cfg_.decoder_efficiency[ch_.user_at(n, j)];
            if (lambda == 0.0) continue;
            // 0.25 w (r_s + r_j)^2 for every s ≤ j, restricted to the free entries
            const double c = 0.5 * lambda * params_.w(j, n);
            const std::size_t pj = pos_[j];
            for (std::size_t s = 0; s <= j; ++s) {
                const std::size_t ps = pos_[s];
                if (ps != npos) h[ps * sz + ps] += c;
                if (pj != npos) h[pj * sz + pj] += c;
                if (ps != npos && pj != npos) {
                    h[ps * sz + pj] += c;
                    h[pj * sz + ps] += c;
                }
            }
        }
        const int kexp = cfg_.penalty_exponent;
        if (kexp >= 2) {
            const double z = linear_count(r, n);
            const double d2 = scale_ * kexp * (kexp - 1) * std::pow(z, kexp - 2);
            for (std::size_t a = 0; a < sz; ++a)
                for (std::size_t b = 0; b < sz; ++b)
                    h[a * sz + b] += d2 * params_.w(idx[a], n) * params_.w(idx[b], n);
        }
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    double linear_count(const Matrix& r, std::size_t n) const {
        double z = 0.0;
        for (std::size_t m = 0; m < r.rows(); ++m) z += params_.w(m, n) * r(m, n) + params_.alpha(m, n);
        return z;
    }

    const SurrogateParams& params_;
    const ChannelSet& ch_;
    const SystemConfig& cfg_;
    TransmissionPart tx_;
    double scale_;
    mutable std::vector<std::size_t> pos_;
};

// Transmission power plus decoding power with the activity indicators frozen
// by the support: the decoding part is linear, Σ_s r_s Σ_{j active, j≥s} λ_j.
class FixedSupportModel final : public detail::BlockObjective {
public:
    FixedSupportModel(const SupportSets& supports, const ChannelSet& ch, const SystemConfig& cfg)
        : tx_(ch, cfg), linear_(cfg.num_users, cfg.num_subcarriers) {
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n)
            for (std::size_t j : supports[n]) {
                const double lambda = cfg.decoder_efficiency[ch.user_at(n, j)];
                for (std::size_t s = 0; s <= j; ++s) linear_(s, n) += lambda;
            }
    }

    double value(const Matrix& r) const override {
        double v = tx_.value(r);
        for (std::size_t i = 0; i < r.size(); ++i) v += linear_.flat()[i] * r.flat()[i];
        return v;
    }

    void gradient(const Matrix& r, Matrix& g) const override {
        std::copy(linear_.flat().begin(), linear_.flat().end(), g.flat().begin());
        tx_.add_gradient(r, g);
    }

    void hessian_block(const Matrix& r, std::size_t n, std::span<const std::size_t> idx,
                       std::span<double> h) const override {
        tx_.hessian_block(r, n, idx, h);
    }

private:
    TransmissionPart tx_;
    Matrix linear_;
};

}  // namespace noma::detail
