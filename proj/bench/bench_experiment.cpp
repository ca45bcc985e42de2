// Serial reference vs OpenMP run_experiment, plus the two fBm samplers.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "fbmsde/fbm.hpp"
#include "fbmsde/montecarlo.hpp"

using namespace fbmsde;

namespace {

ExperimentConfig bench_config(std::size_t n) {
    ExperimentConfig cfg;
    cfg.hurst_values = {0.6, 0.8};
    cfg.c_values = {0.7, 2.0};
    cfg.n_values = {n};
    cfg.replicates = 50;
    cfg.base_seed = 7;
    return cfg;
}

void BM_ExperimentSerial(benchmark::State& state) {
    const ExperimentConfig cfg = bench_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment_serial(cfg));
    }
}

void BM_ExperimentParallel(benchmark::State& state) {
    const ExperimentConfig cfg = bench_config(static_cast<std::size_t>(state.range(0)));
    state.counters["threads"] = omp_get_max_threads();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment(cfg));
    }
}

void BM_Sampler(benchmark::State& state, SynthesisMethod method) {
    const FbmSampler sampler(GridSpec(static_cast<std::size_t>(state.range(0)), 1.0), 0.7, method);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampler.sample(++seed));
    }
}

} // namespace

BENCHMARK(BM_ExperimentSerial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Sampler, circulant, SynthesisMethod::spectral_circulant)
    ->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Sampler, cholesky, SynthesisMethod::cholesky)
    ->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
