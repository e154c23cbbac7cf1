#include <benchmark/benchmark.h>

#include "lrpd/alt.hpp"
#include "lrpd/baselines.hpp"
#include "lrpd/data.hpp"
#include "lrpd/randomized.hpp"

using namespace lrpd;

namespace {

SynthInstance instance(Index n, Index k) {
    SynthSpec spec;
    spec.n = n;
    spec.k_true = k;
    spec.seed = 1;
    return gen_exact_lrpd(spec);
}

void BM_AltIteration(benchmark::State& state) {
    const SynthInstance inst = instance(state.range(0), 5);
    AltConfig cfg;
    cfg.rank = 5;
    const Vector d = inst.d_star * 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(alt_step(inst.a, d, cfg));
}
BENCHMARK(BM_AltIteration)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_StochasticIteration(benchmark::State& state) {
    const SynthInstance inst = instance(state.range(0), 5);
    SketchConfig cfg;
    cfg.rank = 5;
    cfg.budget = 30;
    for (auto _ : state) {
        MatvecOracle o = oracle_from_dense(inst.a);
        benchmark::DoNotOptimize(stochastic_alt_fit(o, cfg, 1, DiagMode::diagpp));
    }
}
BENCHMARK(BM_StochasticIteration)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Nystrom(benchmark::State& state) {
    const SynthInstance inst = instance(state.range(0), 5);
    Rng rng(3);
    for (auto _ : state) {
        MatvecOracle o = oracle_from_dense(inst.a);
        benchmark::DoNotOptimize(nystrom_fixed_rank(o, 5, 20, rng));
    }
}
BENCHMARK(BM_Nystrom)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_Diagpp(benchmark::State& state) {
    const SynthInstance inst = instance(state.range(0), 5);
    Rng rng(4);
    for (auto _ : state) {
        MatvecOracle o = oracle_from_dense(inst.a);
        benchmark::DoNotOptimize(diagpp(o, 30, rng));
    }
}
BENCHMARK(BM_Diagpp)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_MmFit(benchmark::State& state) {
    const SynthInstance inst = instance(state.range(0), 5);
    MmConfig cfg;
    cfg.rank = 5;
    cfg.max_iters = 5;
    for (auto _ : state) benchmark::DoNotOptimize(mm_fit(inst.a, cfg));
}
BENCHMARK(BM_MmFit)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
