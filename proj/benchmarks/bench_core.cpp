#include <benchmark/benchmark.h>

#include "nmrelax/gkls.hpp"
#include "nmrelax/measure.hpp"
#include "nmrelax/propagator.hpp"
#include "nmrelax/spectral.hpp"

namespace {

const nmrelax::ModelParams tms{0.41, 0.20, nmrelax::two_pi * 6.6,
                               nmrelax::two_pi * 1.8, 12};

void BM_CubicSpectrum(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(nmrelax::cubic_spectrum(tms));
    }
}
BENCHMARK(BM_CubicSpectrum);

void BM_Beta(benchmark::State& state) {
    const auto sd = nmrelax::cubic_spectrum(tms);
    double t = 0.0;
    for (auto _ : state) {
        t += 1e-4;
        benchmark::DoNotOptimize(nmrelax::beta_n(tms, sd, t));
    }
}
BENCHMARK(BM_Beta);

void BM_BetaTrajectory(benchmark::State& state) {
    const nmrelax::TimeGrid grid(0.0, 50.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nmrelax::beta_trajectory(tms, grid));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BetaTrajectory)->Arg(10000)->Arg(100000);

void BM_BlpMeasure(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(nmrelax::blp_measure_analytic(
            tms, {0.0, 50.0}, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_BlpMeasure)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_OracleStep(benchmark::State& state) {
    nmrelax::ModelParams p = tms;
    p.n = static_cast<int>(state.range(0));
    const auto gen = nmrelax::gkls::build_star_generator(p);
    const auto rho = nmrelax::gkls::initial_state(p.n, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gen.apply_rhs(rho));
    }
}
BENCHMARK(BM_OracleStep)->Arg(1)->Arg(3)->Arg(6);

void BM_EnsembleBeta(benchmark::State& state) {
    const nmrelax::TimeGrid grid(0.0, 1.0, 2001);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nmrelax::ensemble_beta(
            tms, grid, 0.05, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_EnsembleBeta)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
