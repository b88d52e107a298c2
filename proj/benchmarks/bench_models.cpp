#include <benchmark/benchmark.h>

#include "cavnet/linear_response.hpp"
#include "cavnet/master_equation.hpp"
#include "cavnet/normal_modes.hpp"
#include "cavnet/saturation.hpp"

namespace {

using namespace cavnet;

ModelRates fitted(PresetName name) {
    const Preset p = preset(name);
    return apply_v_scaling(p.rates, p.fitted_v_scaling);
}

void BM_SteadyState(benchmark::State& state) {
    const ModelRates r = fitted(PresetName::Fig2);
    const AtomEnsembleParams atoms = AtomEnsembleParams::collective(5.0, 5.0);
    double delta = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(steady_state(r, atoms, DriveSpec::at(InputPort::A, 1.0, delta)));
        delta += 1e-6;
    }
}
BENCHMARK(BM_SteadyState);

void BM_SteadyStateClosedForm(benchmark::State& state) {
    const ModelRates r = fitted(PresetName::Fig2);
    const AtomEnsembleParams atoms = AtomEnsembleParams::collective(5.0, 5.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            steady_state_analytic(r, atoms, DriveSpec::at(InputPort::A, 1.0, 0.1)));
    }
}
BENCHMARK(BM_SteadyStateClosedForm);

void BM_Sweep600(benchmark::State& state) {
    const ModelRates r = fitted(PresetName::Fig2);
    const AtomEnsembleParams atoms = AtomEnsembleParams::collective(5.0, 5.0);
    SweepOptions opt;
    opt.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_spectrum(r, atoms, opt));
}
BENCHMARK(BM_Sweep600)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_AnalyticModes(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(analytic_modes(3.0, 7.0, 4.0, 11.0));
}
BENCHMARK(BM_AnalyticModes);

void BM_NumericModes(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(numeric_modes(3.0, 7.0, 4.0, 11.0));
}
BENCHMARK(BM_NumericModes);

void BM_SaturatedState(benchmark::State& state) {
    const ModelRates r = fitted(PresetName::Fig3);
    const SaturationParams p = SaturationParams::from(r, preset(PresetName::Fig3).atoms);
    const double yb = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_saturated_state(yb, r, p, Detunings::common(1.0)));
    }
}
BENCHMARK(BM_SaturatedState)->Arg(1)->Arg(100)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_Lindblad(benchmark::State& state) {
    const ModelRates r = fitted(PresetName::Fig2);
    const int n = static_cast<int>(state.range(0));
    const TruncatedHilbertSpec spec{n, n, n};
    const DriveSpec drive = DriveSpec::at(InputPort::A, 1e-3 * r.kappa_1(), 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(lindblad_steady_state(spec, r, 5.0, 5.0, drive));
}
BENCHMARK(BM_Lindblad)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
