#include <benchmark/benchmark.h>

#include "dsep/models/dynamic_models.hpp"
#include "dsep/models/phasor_models.hpp"
#include "dsep/protect.hpp"
#include "dsep/tdsim.hpp"

using namespace dsep;
using namespace dsep::models;

namespace {

SampledWindow noisy_window(ConnectionKind conn, FaultKind fault) {
    const CircuitScenario s = reference_scenario(conn, fault);
    const SampledWindow rec = simulate(s);
    return inject_noise(fault.is_fault() ? select_post_fault_window(rec, s.t_fault) : rec, 0.1, 1);
}

void BM_Simulate(benchmark::State& state) {
    const auto conn = static_cast<ConnectionKind>(state.range(0));
    const CircuitScenario s = reference_scenario(conn, FaultKind::line_ground(Phase::A));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(s));
}
BENCHMARK(BM_Simulate)
    ->Arg(static_cast<int>(ConnectionKind::GroundedWye))
    ->Arg(static_cast<int>(ConnectionKind::Delta))
    ->Unit(benchmark::kMillisecond);

void BM_PhasorSinglePhase(benchmark::State& state) {
    PhasorMeasurement m;
    m.conn = ConnectionKind::SinglePhase;
    m.v[0] = Complex(240.0, 0.0);
    m.i[0] = Complex(10.0, -5.0);
    const ModelId id = *parse_model_id("P-SP");
    for (auto _ : state) {
        const ModelProblem mp = build_phasor_problem(id, m);
        benchmark::DoNotOptimize(solve(mp.problem, mp.x0));
    }
}
BENCHMARK(BM_PhasorSinglePhase)->Unit(benchmark::kMicrosecond);

// Fit of one dynamic model on a window of state.range(0) samples.
void BM_FitDynamic(benchmark::State& state, const char* name, ConnectionKind conn, FaultKind fault) {
    const SampledWindow full = noisy_window(conn, fault);
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(state.range(0)), full.size());
    const SampledWindow w = full.slice(0, n);
    const ModelId id = *parse_model_id(name);
    for (auto _ : state) {
        const ModelProblem mp = build_dynamic_problem(id, w);
        benchmark::DoNotOptimize(solve(mp.problem, mp.x0));
    }
    state.counters["N"] = static_cast<double>(n);
}
BENCHMARK_CAPTURE(BM_FitDynamic, gw_nf, "GW-NF", ConnectionKind::GroundedWye, FaultKind::none())
    ->Arg(100)
    ->Arg(200)
    ->Arg(400)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FitDynamic, d_lg, "D-LG-A", ConnectionKind::Delta, FaultKind::line_ground(Phase::A))
    ->Arg(100)
    ->Arg(266)
    ->Unit(benchmark::kMillisecond);

void BM_ClassifyBank(benchmark::State& state) {
    const auto conn = static_cast<ConnectionKind>(state.range(0));
    const SampledWindow w = noisy_window(conn, FaultKind::line_line(PhasePair::AB));
    for (auto _ : state) benchmark::DoNotOptimize(classify(conn, w));
}
BENCHMARK(BM_ClassifyBank)
    ->Arg(static_cast<int>(ConnectionKind::GroundedWye))
    ->Arg(static_cast<int>(ConnectionKind::Delta))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
