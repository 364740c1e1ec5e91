#include "barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace noma::detail {

void transmission_tail_sums(std::span<const double> r_col, std::span<const double> ranked_gain,
                            const LinkParams& link, std::span<double> tail) {
    const std::size_t m = r_col.size();
    double cum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        cum += r_col[j] / link.bandwidth_mhz;
        const double next = (j + 1 < m) ? link.noise_power_w / ranked_gain[j + 1] : 0.0;
        tail[j] = (link.noise_power_w / ranked_gain[j] - next) * std::exp2(cum);
    }
    for (std::size_t j = m - 1; j-- > 0;) tail[j] += tail[j + 1];
}

namespace {

struct Workspace {
    std::vector<std::vector<std::size_t>> idx;      // free ranks per subcarrier
    std::vector<std::vector<std::size_t>> users;    // user of each free rank
    std::vector<std::vector<double>> hinv;          // per-block inverse
    std::vector<std::vector<double>> y;             // per-block H^{-1} g
    std::vector<std::vector<double>> gb;            // per-block barrier gradient
    std::vector<double> h;
    std::vector<double> h_copy;
};

}  // namespace

BarrierResult barrier_minimize(const BlockObjective& f, const ChannelSet& ch, std::span<const double> demand,
                               const Matrix& free_mask, Matrix r0, const SolverOptions& opts) {
    const std::size_t m = r0.rows();
    const std::size_t n_sc = r0.cols();

    Workspace ws;
    ws.idx.resize(n_sc);
    ws.users.resize(n_sc);
    ws.hinv.resize(n_sc);
    ws.y.resize(n_sc);
    ws.gb.resize(n_sc);
    ws.h.resize(m * m);
    ws.h_copy.resize(m * m);
    std::vector<std::size_t> slots_per_user(m, 0);
    for (std::size_t n = 0; n < n_sc; ++n)
        for (std::size_t j = 0; j < m; ++j)
            if (free_mask(j, n) != 0.0) ++slots_per_user[ch.user_at(n, j)];
    for (std::size_t u = 0; u < m; ++u)
        if (slots_per_user[u] == 0) throw std::invalid_argument("a user has no free slot to carry its demand");

    // A user with a single slot has its rate fixed by the demand equality, so
    // that entry leaves the Newton system.
    Matrix r = std::move(r0);
    struct Fixed {
        std::size_t j, n, u;
    };
    std::vector<Fixed> fixed;
    std::size_t n_free = 0;
    for (std::size_t n = 0; n < n_sc; ++n) {
        for (std::size_t j = 0; j < m; ++j) {
            if (free_mask(j, n) == 0.0) continue;
            const std::size_t u = ch.user_at(n, j);
            if (slots_per_user[u] == 1) {
                r(j, n) = demand[u];
                fixed.push_back({j, n, u});
                continue;
            }
            ws.idx[n].push_back(j);
            ws.users[n].push_back(u);
        }
        const std::size_t k = ws.idx[n].size();
        ws.hinv[n].resize(k * k);
        ws.y[n].resize(k);
        ws.gb[n].resize(k);
        n_free += k;
    }
    Matrix trial = r;  // entries outside the free set must match r across swaps
    Matrix g(m, n_sc);
    Matrix dx(m, n_sc);
    std::vector<double> schur(m * m), schur_copy(m * m), rhs(m), nu(m), rho(m);

    auto residual = [&](const Matrix& x) {
        for (std::size_t u = 0; u < m; ++u) rho[u] = demand[u];
        for (const auto& e : fixed) rho[e.u] -= x(e.j, e.n);
        for (std::size_t n = 0; n < n_sc; ++n)
            for (std::size_t a = 0; a < ws.idx[n].size(); ++a) rho[ws.users[n][a]] -= x(ws.idx[n][a], n);
    };
    auto barrier_value = [&](const Matrix& x, double t, double& log_mag) {
        double v = t * f.value(x);
        log_mag = std::abs(v);
        for (std::size_t n = 0; n < n_sc; ++n)
            for (std::size_t j : ws.idx[n]) {
                const double lg = std::log(x(j, n));
                v -= lg;
                log_mag += std::abs(lg);
            }
        return v;
    };

    constexpr double kCenteringTol = 1e-12;
    constexpr double kNoiseMultiple = 10.0;
    constexpr double kFloorMultiple = 100.0;
    double mu = opts.barrier_mu0;
    std::size_t iters = 0;
    bool converged = false;
    bool exhausted = false;

    while (!exhausted) {
        const double t = 1.0 / mu;
        double best_decrement = std::numeric_limits<double>::infinity();
        int stagnant = 0;
        int flat = 0;  // damped steps accepted only within the rounding allowance
        for (;;) {
            if (iters >= opts.newton_max_iters) {
                exhausted = true;
                break;
            }
            ++iters;
            f.gradient(r, g);
            std::fill(schur.begin(), schur.end(), 0.0);
            std::fill(rhs.begin(), rhs.end(), 0.0);
            for (std::size_t n = 0; n < n_sc; ++n) {
                const auto& idx = ws.idx[n];
                const std::size_t k = idx.size();
                if (k == 0) continue;
                std::span<double> h(ws.h.data(), k * k);
                f.hessian_block(r, n, idx, h);
                // Factor D(tH + R^-2)D with D = diag(r): the barrier part becomes
                // the identity, which keeps entries near zero from swamping the rest.
                double diag_max = 0.0;
                for (std::size_t a = 0; a < k; ++a) {
                    const double xa = r(idx[a], n);
                    for (std::size_t b = 0; b < k; ++b) h[a * k + b] *= t * xa * r(idx[b], n);
                    h[a * k + a] += 1.0;
                    diag_max = std::max(diag_max, h[a * k + a]);
                    ws.gb[n][a] = t * g(idx[a], n) - 1.0 / xa;
                }
                std::copy(h.begin(), h.end(), ws.h_copy.begin());
                double shift = 0.0;
                while (!linalg::cholesky_factor(h, k)) {
                    shift = shift == 0.0 ? 1e-14 * diag_max : shift * 10.0;
                    std::copy(ws.h_copy.begin(), ws.h_copy.begin() + k * k, h.begin());
                    for (std::size_t a = 0; a < k; ++a) h[a * k + a] += shift;
                }
                linalg::cholesky_inverse(h, k, ws.hinv[n]);
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b) ws.hinv[n][a * k + b] *= r(idx[a], n) * r(idx[b], n);
                for (std::size_t a = 0; a < k; ++a) {
                    double s = 0.0;
                    for (std::size_t b = 0; b < k; ++b) s += ws.hinv[n][a * k + b] * ws.gb[n][b];
                    ws.y[n][a] = s;
                    rhs[ws.users[n][a]] += s;
                    for (std::size_t b = 0; b < k; ++b)
                        schur[ws.users[n][a] * m + ws.users[n][b]] += ws.hinv[n][a * k + b];
                }
            }
            residual(r);
            double schur_max = 0.0;
            for (std::size_t u = 0; u < m; ++u) {
                // users without free entries keep ν = 0
                if (slots_per_user[u] == 1) schur[u * m + u] = 1.0;
                schur_max = std::max(schur_max, schur[u * m + u]);
                nu[u] = slots_per_user[u] == 1 ? 0.0 : -rhs[u] - rho[u];
            }
            // Blocks with huge SIC factors can leave the complement indefinite
            // in floating point; a small relative shift restores a usable direction.
            std::copy(schur.begin(), schur.end(), schur_copy.begin());
            double schur_shift = 0.0;
            while (!linalg::cholesky_factor(schur, m)) {
                schur_shift = schur_shift == 0.0 ? 1e-14 * schur_max : schur_shift * 10.0;
                if (!(schur_shift < schur_max)) throw std::runtime_error("demand Schur complement is not positive definite");
                std::copy(schur_copy.begin(), schur_copy.end(), schur.begin());
                for (std::size_t u = 0; u < m; ++u) schur[u * m + u] += schur_shift;
            }
            linalg::cholesky_solve(schur, m, nu);

            double slope = 0.0;
            for (std::size_t n = 0; n < n_sc; ++n) {
                const auto& idx = ws.idx[n];
                const std::size_t k = idx.size();
                for (std::size_t a = 0; a < k; ++a) {
                    double s = ws.y[n][a];
                    for (std::size_t b = 0; b < k; ++b) s += ws.hinv[n][a * k + b] * nu[ws.users[n][b]];
                    dx(idx[a], n) = -s;
                    slope += ws.gb[n][a] * (-s);
                }
            }
            double rho_dot_nu = 0.0;
            double rho_rel = 0.0;
            for (std::size_t u = 0; u < m; ++u) {
                rho_dot_nu += rho[u] * nu[u];
                rho_rel = std::max(rho_rel, std::abs(rho[u]) / demand[u]);
            }
            const double decrement = -slope - rho_dot_nu;
            if (decrement * 0.5 <= kCenteringTol && rho_rel <= 1e-13) break;

            // largest step keeping free entries positive
            double step = 1.0;
            for (std::size_t n = 0; n < n_sc; ++n)
                for (std::size_t j : ws.idx[n])
                    if (dx(j, n) < 0.0) step = std::min(step, -0.99 * r(j, n) / dx(j, n));

            auto take = [&](double s) {
                for (std::size_t n = 0; n < n_sc; ++n)
                    for (std::size_t j : ws.idx[n]) trial(j, n) = r(j, n) + s * dx(j, n);
            };

            double mag = 0.0;
            const double phi0 = barrier_value(r, t, mag);
            const double noise = 1e-14 * (mag + 1.0);

            if (decrement < kNoiseMultiple * noise && step == 1.0) {
                // The predicted decrease is below rounding resolution, so the
                // line search cannot judge the step; take it and watch the decrement.
                take(1.0);
                std::swap(r, trial);
                stagnant = (std::abs(decrement) > 0.25 * best_decrement) ? stagnant + 1 : 0;
                best_decrement = std::min(best_decrement, std::abs(decrement));
                if (stagnant >= 3) break;
                continue;
            }

            bool accepted = false;
            double phi1 = phi0;
            while (step > 1e-14) {
                take(step);
                bool positive = true;
                for (std::size_t n = 0; n < n_sc && positive; ++n)
                    for (std::size_t j : ws.idx[n])
                        if (!(trial(j, n) > 0.0)) {
                            positive = false;
                            break;
                        }
                if (positive) {
                    double mag_trial = 0.0;
                    phi1 = barrier_value(trial, t, mag_trial);
                    if (phi1 <= phi0 + opts.ls_alpha * step * std::min(slope, 0.0) + noise) {
                        accepted = true;
                        break;
                    }
                }
                step *= opts.ls_beta;
            }
            if (!accepted) break;  // stalled at rounding level; treat as centered
            std::swap(r, trial);
            flat = (phi1 > phi0 - noise) ? flat + 1 : 0;
            if (flat >= 3) break;
            // Near the rounding floor Newton should still shrink the decrement
            // fast; if it keeps hovering, the center is as good as it gets.
            if (std::abs(decrement) < kFloorMultiple * noise) {
                stagnant = (std::abs(decrement) > 0.25 * best_decrement) ? stagnant + 1 : 0;
                if (stagnant >= 3) break;
            }
            best_decrement = std::min(best_decrement, std::abs(decrement));
        }
        if (exhausted) break;
        const double fval = f.value(r);
        if (static_cast<double>(n_free) * mu <= opts.newton_tol * std::abs(fval)) {
            converged = true;
            break;
        }
        mu *= opts.barrier_shrink;
    }

    BarrierResult out;
    out.objective = f.value(r);
    out.converged = converged;
    out.newton_iters = iters;

    // KKT residual: demand multipliers read off each user's largest entry,
    // bound duals s = g + ν, then dual feasibility and complementarity.
    f.gradient(r, g);
    std::vector<double> nu_ls(m, 0.0), r_best(m, -1.0);
    double gmax = 0.0;
    for (std::size_t n = 0; n < n_sc; ++n)
        for (std::size_t a = 0; a < ws.idx[n].size(); ++a) {
            const std::size_t j = ws.idx[n][a];
            const std::size_t u = ws.users[n][a];
            if (r(j, n) > r_best[u]) {
                r_best[u] = r(j, n);
                nu_ls[u] = -g(j, n);
            }
            gmax = std::max(gmax, std::abs(g(j, n)));
        }
    double stationarity = 0.0;
    for (std::size_t n = 0; n < n_sc; ++n)
        for (std::size_t a = 0; a < ws.idx[n].size(); ++a) {
            const std::size_t j = ws.idx[n][a];
            const std::size_t u = ws.users[n][a];
            const double s_dual = g(j, n) + nu_ls[u];
            stationarity = std::max(stationarity, std::max(-s_dual, 0.0));
            stationarity = std::max(stationarity, std::abs(s_dual) * r(j, n) / demand[u]);
        }
    residual(r);
    double primal = 0.0;
    for (std::size_t u = 0; u < m; ++u) primal = std::max(primal, std::abs(rho[u]) / demand[u]);
    // every part is relative, since objective and gradient scales vary by decades across drops
    const double gap = static_cast<double>(n_free) * mu / std::max(std::abs(out.objective), 1e-300);
    out.kkt_residual = std::max({stationarity / std::max(gmax, 1e-300), primal, gap});
    out.r = std::move(r);
    return out;
}

}  // namespace noma::detail
