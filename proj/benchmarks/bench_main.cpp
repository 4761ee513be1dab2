#include <benchmark/benchmark.h>

#include "ptbench/medium.hpp"
#include "ptbench/paraxial.hpp"
#include "ptbench/pipeline.hpp"
#include "ptbench/presets.hpp"

using namespace ptbench;

namespace {

void BM_TransferMatrixAnalytic(benchmark::State& state) {
    const PTMediumParams p = fig2_preset();
    for (auto _ : state) benchmark::DoNotOptimize(m_opt_analytic(p));
}
BENCHMARK(BM_TransferMatrixAnalytic);

void BM_TransferMatrixNumeric(benchmark::State& state) {
    const PTMediumParams p = fig2_preset();
    const double length = derive(p).length;
    for (auto _ : state) benchmark::DoNotOptimize(m_opt_numeric(p, length));
}
BENCHMARK(BM_TransferMatrixNumeric);

void BM_RunBench(benchmark::State& state) {
    ExperimentSettings s;
    s.medium = fig2_preset();
    s.hwp_angle = pi / 4;
    for (auto _ : state) benchmark::DoNotOptimize(run_bench(s));
}
BENCHMARK(BM_RunBench);

void BM_SignalingDelta(benchmark::State& state) {
    const PTMediumParams p = fig2_preset();
    for (auto _ : state) benchmark::DoNotOptimize(signaling_delta(p, pi / 4, pi / 2, 0.0));
}
BENCHMARK(BM_SignalingDelta);

void BM_MaxChsh(benchmark::State& state) {
    const PTMediumParams p = fig2_preset();
    for (auto _ : state) benchmark::DoNotOptimize(max_chsh(p, static_cast<int>(state.range(0))));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MaxChsh)->Arg(8)->Arg(16)->Arg(32)->Complexity();

void BM_SplitStep(benchmark::State& state) {
    const auto samples = static_cast<int>(state.range(0));
    const TransverseGrid grid(samples, 16.0);
    const TransverseField f0 = gaussian_profiles(0.0, 1.0, grid);
    const PTMediumParams medium(0.5, pi / 2, 1.0, 0.0);
    const double z = derive(medium).length;
    PropagationConfig cfg;
    cfg.medium = medium;
    cfg.wave_number = 1e3 * z;
    cfg.dz = z / 50;
    const Eigen::VectorXd x = grid.positions();
    cfg.coupling_profile = (-(x.array() / 8.0).pow(4)).exp();
    for (auto _ : state) benchmark::DoNotOptimize(split_step_propagate(f0, cfg, grid, z));
    state.SetComplexityN(samples);
}
BENCHMARK(BM_SplitStep)->Arg(128)->Arg(256)->Arg(512)->Complexity(benchmark::oNLogN);

} // namespace

BENCHMARK_MAIN();
