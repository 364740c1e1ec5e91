#include <benchmark/benchmark.h>

#include <random>

#include "noma/channel.hpp"
#include "noma/objective.hpp"
#include "noma/oracle.hpp"
#include "noma/solver.hpp"
#include "noma/transform.hpp"

namespace {

using namespace noma;

struct Drop {
    SystemConfig cfg;
    ChannelSet ch;
};

Drop make_drop(std::size_t m, std::size_t n, double demand, std::size_t cap, std::uint64_t seed = 1) {
    SystemConfig cfg = validate_config(make_config(m, n, demand, cap));
    ChannelSet ch = generate_channels(cfg, generate_geometry(cfg, seed), seed);
    return {std::move(cfg), std::move(ch)};
}

RateAllocation random_rates(std::size_t m, std::size_t n, double hi) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, hi);
    Matrix r(m, n);
    for (double& v : r.flat()) v = u(rng);
    return RateAllocation{std::move(r)};
}

void BM_RatesToPowers(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto d = make_drop(m, m, 4.0, 2);
    const auto r = random_rates(m, m, 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(rates_to_powers(r, d.ch, d.cfg));
}
BENCHMARK(BM_RatesToPowers)->Arg(4)->Arg(10)->Arg(32);

void BM_SubproblemGradient(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto d = make_drop(m, m, 4.0, 2);
    const auto r = random_rates(m, m, 4.0);
    const auto params = update_surrogate(r, d.cfg.tau());
    for (auto _ : state) benchmark::DoNotOptimize(subproblem_gradient(r, params, d.ch, d.cfg));
}
BENCHMARK(BM_SubproblemGradient)->Arg(4)->Arg(10)->Arg(32);

void BM_SolveSubproblem(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto d = make_drop(m, m, 4.0, 2);
    const auto start = init_feasible(d.cfg, d.ch);
    const auto params = update_surrogate(start, d.cfg.tau());
    for (auto _ : state) benchmark::DoNotOptimize(solve_subproblem(params, d.ch, d.cfg, start, SolverOptions{}));
}
BENCHMARK(BM_SolveSubproblem)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Jpcuc(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto d = make_drop(m, m, static_cast<double>(state.range(1)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(jpcuc(d.cfg, d.ch, SolverOptions{}));
}
BENCHMARK(BM_Jpcuc)->Args({4, 4})->Args({4, 20})->Args({10, 4})->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
    const auto cap = static_cast<std::size_t>(state.range(0));
    const auto d = make_drop(4, 3, 12.0, cap);
    for (auto _ : state) benchmark::DoNotOptimize(oracle_optimum(d.cfg, d.ch, SolverOptions{}));
}
BENCHMARK(BM_Oracle)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_OmaBaseline(benchmark::State& state) {
    const auto d = make_drop(4, 4, 12.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(oma_baseline(d.cfg, d.ch, SolverOptions{}));
}
BENCHMARK(BM_OmaBaseline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
