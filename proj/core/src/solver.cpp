#include "noma/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "barrier.hpp"
#include "models.hpp"

namespace noma {

SolverOptions validate_options(const SolverOptions& opts) {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) throw ConfigError(std::string("nonpositive ") + what);
    };
    positive(opts.outer_tol, "outer tolerance");
    positive(opts.newton_tol, "newton tolerance");
    positive(opts.barrier_mu0, "initial barrier parameter");
    positive(opts.repair_tolerance, "repair tolerance");
    positive(opts.tau_floor_factor, "tau floor");
    if (!(opts.barrier_shrink > 0.0 && opts.barrier_shrink < 1.0)) throw ConfigError("barrier shrink outside (0, 1)");
    if (!(opts.ls_alpha > 0.0 && opts.ls_alpha < 0.5)) throw ConfigError("line-search alpha outside (0, 0.5)");
    if (!(opts.ls_beta > 0.0 && opts.ls_beta < 1.0)) throw ConfigError("line-search beta outside (0, 1)");
    if (!(opts.tau_decay > 0.0 && opts.tau_decay <= 1.0)) throw ConfigError("tau decay outside (0, 1]");
    if (opts.outer_max_iters < 1) throw ConfigError("outer iteration limit below 1");
    if (opts.newton_max_iters < 1) throw ConfigError("newton iteration limit below 1");
    return opts;
}

RateAllocation init_feasible(const SystemConfig& cfg, const ChannelSet& ch) {
    RateAllocation r{Matrix(cfg.num_users, cfg.num_subcarriers)};
    const double n_sc = static_cast<double>(cfg.num_subcarriers);
    for (std::size_t n = 0; n < cfg.num_subcarriers; ++n)
        for (std::size_t u = 0; u < cfg.num_users; ++u) r.values(ch.rank_of(n, u), n) = cfg.rate_demand[u] / n_sc;
    return r;
}

double demand_violation(const RateAllocation& r, const ChannelSet& ch, const SystemConfig& cfg) {
    double worst = 0.0;
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        double sum = 0.0;
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) sum += r.values(ch.rank_of(n, u), n);
        worst = std::max(worst, std::abs(sum - cfg.rate_demand[u]) / cfg.rate_demand[u]);
    }
    return worst;
}

namespace {

using detail::FixedSupportModel;
using detail::SurrogateModel;

// Rescales each user's entries on free slots so the demands hold exactly.
void restore_demands(Matrix& r, const Matrix& free_mask, const ChannelSet& ch, const SystemConfig& cfg) {
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        double sum = 0.0;
        std::size_t slots = 0;
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) {
            const std::size_t j = ch.rank_of(n, u);
            if (free_mask(j, n) == 0.0) {
                r(j, n) = 0.0;
                continue;
            }
            sum += r(j, n);
            ++slots;
        }
        if (slots == 0) continue;
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) {
            const std::size_t j = ch.rank_of(n, u);
            if (free_mask(j, n) == 0.0) continue;
            r(j, n) = sum > 0.0 ? r(j, n) * (cfg.rate_demand[u] / sum) : cfg.rate_demand[u] / slots;
        }
    }
}

// Interior starting point for the barrier: `warm` blended toward the even
// split over free slots whenever some free entry sits near the boundary.
Matrix interior_start(const Matrix& warm, const Matrix& free_mask, const ChannelSet& ch, const SystemConfig& cfg) {
    constexpr double theta = 1e-3;
    Matrix even(warm.rows(), warm.cols());
    restore_demands(even, free_mask, ch, cfg);
    bool interior = true;
    for (std::size_t i = 0; i < warm.size(); ++i)
        if (free_mask.flat()[i] != 0.0 && !(warm.flat()[i] > theta * even.flat()[i])) interior = false;
    if (interior) return warm;
    Matrix out(warm.rows(), warm.cols());
    for (std::size_t i = 0; i < warm.size(); ++i)
        if (free_mask.flat()[i] != 0.0) out.flat()[i] = (1.0 - theta) * warm.flat()[i] + theta * even.flat()[i];
    return out;
}

}  // namespace

Matrix subproblem_gradient(const RateAllocation& r, const SurrogateParams& params, const ChannelSet& ch,
                           const SystemConfig& cfg) {
    Matrix g(r.values.rows(), r.values.cols());
    SurrogateModel(params, ch, cfg).gradient(r.values, g);
    return g;
}

SubproblemResult solve_subproblem(const SurrogateParams& params, const ChannelSet& ch, const SystemConfig& cfg,
                                  const RateAllocation& warm_start, const SolverOptions& opts,
                                  const Matrix* pinned) {
    const Matrix& w0 = warm_start.values;
    if (w0.rows() != cfg.num_users || w0.cols() != cfg.num_subcarriers)
        throw std::invalid_argument("warm start has the wrong shape");
    for (double v : w0.flat())
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("infeasible warm start: negative rate");
    const double violation = demand_violation(warm_start, ch, cfg);
    if (violation > 1e-6) {
        std::ostringstream os;
        os << "infeasible warm start: demand violation " << violation;
        throw std::invalid_argument(os.str());
    }

    Matrix free_mask(cfg.num_users, cfg.num_subcarriers, 1.0);
    if (pinned)
        for (std::size_t i = 0; i < free_mask.size(); ++i)
            if (pinned->flat()[i] != 0.0) free_mask.flat()[i] = 0.0;

    Matrix start = w0;
    restore_demands(start, free_mask, ch, cfg);
    start = interior_start(start, free_mask, ch, cfg);

    SurrogateModel model(params, ch, cfg);
    auto res = detail::barrier_minimize(model, ch, cfg.rate_demand, free_mask, std::move(start), opts);
    return {RateAllocation{std::move(res.r)}, res.converged, res.newton_iters, res.kkt_residual, res.objective};
}

SubproblemResult solve_fixed_support(const SupportSets& supports, const SystemConfig& cfg, const ChannelSet& ch,
                                     const SolverOptions& opts) {
    if (supports.size() != cfg.num_subcarriers) throw std::invalid_argument("support has the wrong number of subcarriers");
    Matrix free_mask(cfg.num_users, cfg.num_subcarriers);
    for (std::size_t n = 0; n < supports.size(); ++n)
        for (std::size_t j : supports[n]) {
            if (j >= cfg.num_users) throw std::invalid_argument("support rank out of range");
            free_mask(j, n) = 1.0;
        }
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        bool any = false;
        for (std::size_t n = 0; n < cfg.num_subcarriers && !any; ++n) any = free_mask(ch.rank_of(n, u), n) != 0.0;
        if (!any) throw std::invalid_argument("infeasible support: a user has no active subcarrier");
    }
    Matrix start(cfg.num_users, cfg.num_subcarriers);
    restore_demands(start, free_mask, ch, cfg);

    FixedSupportModel model(supports, ch, cfg);
    auto res = detail::barrier_minimize(model, ch, cfg.rate_demand, free_mask, std::move(start), opts);
    return {RateAllocation{std::move(res.r)}, res.converged, res.newton_iters, res.kkt_residual, res.objective};
}

void finalize_report(SolveReport& report, const SystemConfig& cfg, const ChannelSet& ch) {
    const double eps = cfg.epsilon_support();
    report.powers = rates_to_powers(report.rates, ch, cfg);
    report.objective = total_power(report.rates, ch, cfg);
    report.support_per_subcarrier.clear();
    report.cap_satisfied = true;
    for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) {
        report.support_per_subcarrier.push_back(support(report.rates.values.col(n), eps));
        if (report.support_per_subcarrier.back().size() > cfg.cluster_cap) report.cap_satisfied = false;
    }
}

namespace {

double tau_at(const SystemConfig& cfg, const SolverOptions& opts, std::size_t iteration) {
    const double base = cfg.tau();
    if (opts.tau_schedule == TauSchedule::Fixed) return base;
    const double floor = opts.tau_floor_factor * cfg.rate_scale();
    return std::max(base * std::pow(opts.tau_decay, static_cast<double>(iteration)), floor);
}

}  // namespace

SolveReport jpcuc(const SystemConfig& cfg, const ChannelSet& ch, const SolverOptions& opts) {
    SolveReport report;
    report.method = "jpcuc";
    const double eps = cfg.epsilon_support();
    const double cap_base = static_cast<double>(cfg.cluster_cap) + 0.5;

    RateAllocation r = init_feasible(cfg, ch);
    double tau = tau_at(cfg, opts, 0);
    double current = smoothed_objective(r, ch, cfg, tau);
    report.trace.push_back({current, current, demand_violation(r, ch, cfg)});

    bool inner_ok = true;
    bool warned = false;
    int quiet = 0;
    for (std::size_t it = 0; it < opts.outer_max_iters; ++it) {
        tau = tau_at(cfg, opts, it);
        if (opts.tau_schedule != TauSchedule::Fixed) current = smoothed_objective(r, ch, cfg, tau);
        const SurrogateParams params = update_surrogate(r, tau);
        if (!warned) {
            for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) {
                double z = 0.0;
                for (std::size_t m = 0; m < cfg.num_users; ++m)
                    z += params.w(m, n) * r.values(m, n) + params.alpha(m, n);
                if (z / cap_base > 1.5) {
                    std::ostringstream os;
                    os << "penalty base " << z / cap_base << " on subcarrier " << n
                       << " exceeds 1.5; the K-th power dominates conditioning";
                    report.warnings.push_back(os.str());
                    warned = true;
                    break;
                }
            }
        }
        auto sub = solve_subproblem(params, ch, cfg, r, opts);
        inner_ok = inner_ok && sub.converged;
        ++report.outer_iters;

        // The anchor is feasible with surrogate value equal to the smoothed
        // objective; never accept an inner result that is worse than it.
        const double anchor_value = surrogate_objective(r, ch, cfg, params);
        double surrogate_value = surrogate_objective(sub.rates, ch, cfg, params);
        if (surrogate_value > anchor_value) {
            sub.rates = r;
            surrogate_value = anchor_value;
        }
        const double next = smoothed_objective(sub.rates, ch, cfg, tau);
        report.trace.push_back({next, surrogate_value, demand_violation(sub.rates, ch, cfg)});
        const double change = std::abs(current - next);
        r = std::move(sub.rates);
        // Two quiet steps in a row: the first MM steps off a flat start can be tiny.
        quiet = change <= opts.outer_tol * std::max(std::abs(current), 1e-300) ? quiet + 1 : 0;
        current = next;
        if (quiet >= 2) {
            report.mm_converged = true;
            break;
        }
    }

    // Threshold to an explicit clustering and re-solve on that support.
    const ObjectiveBreakdown before = total_power(r, ch, cfg);
    Matrix pinned(cfg.num_users, cfg.num_subcarriers);
    RateAllocation thresholded = r;
    for (std::size_t i = 0; i < pinned.size(); ++i)
        if (!(r.values.flat()[i] > eps)) {
            pinned.flat()[i] = 1.0;
            thresholded.values.flat()[i] = 0.0;
        }
    Matrix free_mask(cfg.num_users, cfg.num_subcarriers, 1.0);
    for (std::size_t i = 0; i < pinned.size(); ++i) free_mask.flat()[i] = 1.0 - pinned.flat()[i];
    restore_demands(thresholded.values, free_mask, ch, cfg);
    const SurrogateParams final_params = update_surrogate(r, tau);
    auto repaired = solve_subproblem(final_params, ch, cfg, thresholded, opts, &pinned);
    inner_ok = inner_ok && repaired.converged;

    report.rates = std::move(repaired.rates);
    finalize_report(report, cfg, ch);
    report.repair_shift = std::abs(report.objective.total_w - before.total_w) / std::max(before.total_w, 1e-300);
    report.converged = report.mm_converged && inner_ok && report.repair_shift <= opts.repair_tolerance;
    return report;
}

}  // namespace noma
