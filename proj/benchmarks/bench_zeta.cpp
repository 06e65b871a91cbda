#include <benchmark/benchmark.h>

#include "adelic/zeta.hpp"

using namespace adelic;

namespace {

ZetaSpec spec_for(int rank) {
    ZetaSpec s;
    s.field = rationals();
    s.rank = rank;
    s.A = 1.0;
    s.quad.chart_points = 256;
    s.quad.v_panels = 6;
    return s;
}

}  // namespace

static void BM_KernelBuild(benchmark::State& state) {
    const ZetaSpec spec = spec_for(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        ZetaEvaluator ev(spec);
        benchmark::DoNotOptimize(ev.volume());
    }
}
BENCHMARK(BM_KernelBuild)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

static void BM_ContinuedEval(benchmark::State& state) {
    const ZetaEvaluator ev(spec_for(static_cast<int>(state.range(0))));
    Complex s(0.5, 3.0);
    for (auto _ : state) {
        ZetaPoint p = ev.zeta_continued(s);
        benchmark::DoNotOptimize(p);
        s += Complex(0.0, 1e-9);  // defeat any caching by the optimizer
    }
}
BENCHMARK(BM_ContinuedEval)->DenseRange(1, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
