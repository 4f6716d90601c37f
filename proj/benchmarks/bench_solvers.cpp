#include "cranopt/experiment.hpp"

#include <benchmark/benchmark.h>

using namespace cranopt;

namespace {

Scenario network(int n_rrh, int users, double demand_bps) {
    ScenarioConfig c;
    c.n_rrh = n_rrh;
    c.users_per_rrh = users;
    c.demand_bps = demand_bps;
    c.seed = 1;
    return generate(c);
}

void BM_LoadFixedPoint(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Scenario sc = network(n, 18, 750e3);
    const Vector p = Vector::Constant(n, PowerParams{}.p_max);
    for (auto _ : state) benchmark::DoNotOptimize(nlce_fixed_point(sc, p));
}
BENCHMARK(BM_LoadFixedPoint)->Arg(3)->Arg(6)->Arg(9);

void BM_SStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Scenario sc = network(n, 18, 750e3);
    const PowerParams params;
    const Vector p = Vector::Constant(n, params.p_max);
    for (auto _ : state) benchmark::DoNotOptimize(s_step(sc, params, p, params.m_max));
}
BENCHMARK(BM_SStep)->Arg(3)->Arg(6)->Arg(9);

void BM_SolveFixedM(benchmark::State& state) {
    const Scenario sc = network(6, 12, 1e6);
    const PowerParams params;
    for (auto _ : state) benchmark::DoNotOptimize(solve_fixed_m(sc, params, 3));
}
BENCHMARK(BM_SolveFixedM)->Unit(benchmark::kMillisecond);

void BM_JointSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Scenario sc = network(n, 18, 750e3);
    const PowerParams params;
    for (auto _ : state) benchmark::DoNotOptimize(solve(sc, params));
}
BENCHMARK(BM_JointSolve)->Arg(3)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_Tpoa(benchmark::State& state) {
    const Scenario sc = network(9, 18, 750e3);
    const PowerParams params;
    for (auto _ : state) benchmark::DoNotOptimize(tpoa(sc, params));
}
BENCHMARK(BM_Tpoa)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveSearch(benchmark::State& state) {
    const Scenario sc = network(2, 2, 4e6);
    const PowerParams params;
    EsaConfig config;
    config.grid_points = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(esa(sc, params, config));
}
BENCHMARK(BM_ExhaustiveSearch)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
