#include <benchmark/benchmark.h>

#include <random>

#include "floq/floquet_bundle.hpp"
#include "floq/oracles.hpp"

using namespace floq;

namespace {

DelayCocycle quasi_periodic(int m) {
    return DelayCocycle(GridSpec(m, 2.0), TorusFlow{},
                        CoeffSpec::harmonic(0.1, 0.05, 1.0, 0.5));
}

StateVector random_cone_state(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    StateVector u = zero_state(g);
    u.head = unit(rng);
    for (double& t : u.tail) t = unit(rng);
    return u;
}

} // namespace

static void IntegrateUnit(benchmark::State& state) {
    const auto sys = quasi_periodic(static_cast<int>(state.range(0)));
    std::mt19937_64 rng(1);
    const StateVector u = random_cone_state(sys.grid(), rng);
    const BasePoint w = torus_point(0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sys.integrate_unit(w, u));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(IntegrateUnit)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Complexity();

static void UnitMatrixAssembly(benchmark::State& state) {
    const auto sys = quasi_periodic(static_cast<int>(state.range(0)));
    const BasePoint w = torus_point(0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sys.unit_matrix(w));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(UnitMatrixAssembly)->Arg(32)->Arg(64)->Arg(128)->Complexity();

static void FocusingConstants(benchmark::State& state) {
    const auto sys = quasi_periodic(static_cast<int>(state.range(0)));
    std::mt19937_64 rng(2);
    const StateVector u = random_cone_state(sys.grid(), rng);
    const BasePoint w = torus_point(0.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sys.focusing_constants(w, u));
    }
}
BENCHMARK(FocusingConstants)->Arg(64)->Arg(128);

static void DualUnitStep(benchmark::State& state) {
    const auto sys = quasi_periodic(static_cast<int>(state.range(0)));
    const DualVector v = e_star(sys.grid());
    const BasePoint w = torus_point(0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dual_unit_step(sys, w, v));
    }
}
BENCHMARK(DualUnitStep)->Arg(64)->Arg(128);

static void ProjectiveDistance(benchmark::State& state) {
    GridSpec g(static_cast<int>(state.range(0)), 2.0);
    std::mt19937_64 rng(3);
    const StateVector u = random_cone_state(g, rng);
    const StateVector v = random_cone_state(g, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(proj_dist(u, v));
    }
}
BENCHMARK(ProjectiveDistance)->Arg(64)->Arg(1024);

static void PullbackPrincipal(benchmark::State& state) {
    const auto sys = quasi_periodic(64);
    const BasePoint w = torus_point(0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pullback_principal(sys, w, 1e-10, 200));
    }
}
BENCHMARK(PullbackPrincipal);

static void LyapunovTopHorizon100(benchmark::State& state) {
    const auto sys = quasi_periodic(64);
    const BasePoint w = torus_point(0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lyapunov_top(sys, w, 100));
    }
}
BENCHMARK(LyapunovTopHorizon100);

static void BenettinHorizon100(benchmark::State& state) {
    const auto sys = quasi_periodic(64);
    const BasePoint w = torus_point(0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(benettin_exponents(sys, w, 100));
    }
}
BENCHMARK(BenettinHorizon100);

BENCHMARK_MAIN();
