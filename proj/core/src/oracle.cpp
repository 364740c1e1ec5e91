#include "noma/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace noma {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
    return a * b;
}

// All subsets of {0..m-1} with at most `cap` elements, lexicographic.
std::vector<std::vector<std::size_t>> small_subsets(std::size_t m, std::size_t cap) {
    std::vector<std::vector<std::size_t>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::uint64_t{1} << i)) s.push_back(i);
        if (s.size() <= cap) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Lower bound on the fixed-support optimum. Decoding power is linear in r for
// a frozen support and each SIC power is at least its interference-free value,
// so the bound splits per user into min Σ_n c_n r_n + a_n (2^{r_n/B} - 1) over
// Σ_n r_n = R. Any multiplier ν gives a valid bound by weak duality; ν is
// tuned by bisection so the bound is close to tight.
double pattern_lower_bound(const SupportSets& pattern, const SystemConfig& cfg, const ChannelSet& ch) {
    const double bw = cfg.bandwidth_mhz();
    const double k = std::numbers::ln2 / bw;
    const double sigma2 = cfg.noise_power_w();
    double total = 0.0;
    std::vector<double> c, a;
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        c.clear();
        a.clear();
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) {
            const std::size_t rank = ch.rank_of(n, u);
            const auto& supp = pattern[n];
            if (!std::binary_search(supp.begin(), supp.end(), rank)) continue;
            double coef = 0.0;
            for (std::size_t j : supp)
                if (j >= rank) coef += cfg.decoder_efficiency[ch.user_at(n, j)];
            c.push_back(coef);
            a.push_back(sigma2 / ch.gains()(u, n));
        }
        if (c.empty()) return std::numeric_limits<double>::infinity();
        const double demand = cfg.rate_demand[u];
        // g_n(r) - ν r is minimized at r = max(0, B log2(ν' / (a k))) with ν' = ν - c
        auto dual = [&](double nu) {
            double v = nu * demand;
            for (std::size_t i = 0; i < c.size(); ++i) {
                const double slack = nu - c[i];
                const double r = slack > a[i] * k ? bw * std::log2(slack / (a[i] * k)) : 0.0;
                v += c[i] * r + a[i] * std::expm1(r * std::numbers::ln2 / bw) - nu * r;
            }
            return v;
        };
        auto supply = [&](double nu) {
            double sum = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                const double slack = nu - c[i];
                if (slack > a[i] * k) sum += bw * std::log2(slack / (a[i] * k));
            }
            return sum;
        };
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            lo = std::min(lo, c[i] + a[i] * k);
            hi = std::max(hi, c[i] + a[i] * k * std::exp2(demand / bw));
        }
        for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (supply(mid) < demand ? lo : hi) = mid;
        }
        total += std::max(dual(lo), dual(hi));
    }
    return total;
}

}  // namespace

std::size_t candidate_pattern_count(std::size_t num_users, std::size_t num_subcarriers, std::size_t cluster_cap) {
    std::size_t per = 0;
    for (std::size_t k = 0; k <= std::min(cluster_cap, num_users); ++k) per += binomial(num_users, k);
    std::size_t total = 1;
    for (std::size_t n = 0; n < num_subcarriers; ++n) total = saturating_mul(total, per);
    return total;
}

void enumerate_supports(std::size_t num_users, std::size_t num_subcarriers, std::size_t cluster_cap,
                        const std::function<void(const SupportSets&)>& visit, const Ranking* ranking,
                        std::size_t budget) {
    const std::size_t count = candidate_pattern_count(num_users, num_subcarriers, cluster_cap);
    if (count > budget || num_users > 63) {
        std::ostringstream os;
        os << "exhaustive search over " << count << " clusterings exceeds the budget of " << budget
           << "; use fewer users or subcarriers";
        throw EnumerationBudgetError(os.str());
    }
    const auto subsets = small_subsets(num_users, cluster_cap);
    // users covered by each subset on each subcarrier
    std::vector<std::vector<std::uint64_t>> covers(num_subcarriers, std::vector<std::uint64_t>(subsets.size(), 0));
    for (std::size_t n = 0; n < num_subcarriers; ++n)
        for (std::size_t i = 0; i < subsets.size(); ++i)
            for (std::size_t j : subsets[i]) {
                const std::size_t user = ranking ? ranking->user_at[n][j] : j;
                covers[n][i] |= std::uint64_t{1} << user;
            }
    const std::uint64_t all = (num_users == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << num_users) - 1);

    std::vector<std::size_t> digit(num_subcarriers, 0);
    SupportSets pattern(num_subcarriers);
    for (;;) {
        std::uint64_t covered = 0;
        for (std::size_t n = 0; n < num_subcarriers; ++n) covered |= covers[n][digit[n]];
        if (covered == all) {
            for (std::size_t n = 0; n < num_subcarriers; ++n) pattern[n] = subsets[digit[n]];
            visit(pattern);
        }
        // odometer, last subcarrier fastest
        std::size_t pos = num_subcarriers;
        while (pos > 0) {
            --pos;
            if (++digit[pos] < subsets.size()) break;
            digit[pos] = 0;
            if (pos == 0) return;
        }
        if (num_subcarriers == 0) return;
    }
}

SolveReport oracle_optimum(const SystemConfig& cfg, const ChannelSet& ch, const SolverOptions& opts) {
    SolveReport best;
    best.method = "oracle";
    best.feasible = false;
    double best_total = std::numeric_limits<double>::infinity();
    bool best_converged = false;

    // Solve patterns in ascending lower-bound order and stop once the bound
    // reaches the incumbent; the result is the same global optimum as solving
    // every pattern.
    struct Candidate {
        double bound;
        SupportSets pattern;
    };
    std::vector<Candidate> candidates;
    enumerate_supports(
        cfg.num_users, cfg.num_subcarriers, cfg.cluster_cap,
        [&](const SupportSets& pattern) { candidates.push_back({pattern_lower_bound(pattern, cfg, ch), pattern}); },
        &ch.ranking(), opts.enumeration_budget);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.bound < y.bound; });

    const SupportSets* best_pattern = nullptr;
    for (const auto& cand : candidates) {
        if (cand.bound >= best_total) break;
        auto res = solve_fixed_support(cand.pattern, cfg, ch, opts);
        const double total = total_power(res.rates, ch, cfg).total_w;
        if (total < best_total) {
            best_total = total;
            best.rates = std::move(res.rates);
            best_converged = res.converged;
            best.feasible = true;
            best_pattern = &cand.pattern;
        }
    }

    // A winning pattern may hold slots whose optimal rate is zero; the barrier
    // leaves them at a tiny positive value. Re-solve on the slots that are
    // actually used so equal clusterings give bit-identical answers whatever
    // pattern led to them (e.g. across nested cluster caps).
    if (best_pattern) {
        const double eps = cfg.epsilon_support();
        SupportSets used(cfg.num_subcarriers);
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) used[n] = support(best.rates.values.col(n), eps);
        if (used != *best_pattern) {
            auto res = solve_fixed_support(used, cfg, ch, opts);
            const double total = total_power(res.rates, ch, cfg).total_w;
            if (total <= best_total * (1.0 + 1e-9)) {
                best_total = total;
                best.rates = std::move(res.rates);
                best_converged = res.converged;
            }
        }
    }

    if (!best.feasible) {
        best.rates = RateAllocation{Matrix(cfg.num_users, cfg.num_subcarriers)};
        best.powers = PowerAllocation{Matrix(cfg.num_users, cfg.num_subcarriers)};
        best.objective.total_w = std::numeric_limits<double>::infinity();
        best.objective.transmission_w = std::numeric_limits<double>::infinity();
        best.support_per_subcarrier.assign(cfg.num_subcarriers, {});
        best.cap_satisfied = false;
        best.converged = false;
        best.warnings.push_back("no clustering within the cluster cap serves every user");
        return best;
    }
    finalize_report(best, cfg, ch);
    best.mm_converged = true;
    best.converged = best_converged;
    return best;
}

SolveReport oma_baseline(const SystemConfig& cfg, const ChannelSet& ch, const SolverOptions& opts) {
    SystemConfig single = cfg;
    single.cluster_cap = 1;
    if (candidate_pattern_count(single.num_users, single.num_subcarriers, 1) <= opts.enumeration_budget) {
        auto report = oracle_optimum(single, ch, opts);
        report.method = "oma-exact";
        return report;
    }
    auto report = jpcuc(single, ch, opts);
    report.method = "oma-jpcuc";
    return report;
}

}  // namespace noma
