#include <benchmark/benchmark.h>

#include "gou/analysis.hpp"
#include "gou/simulate.hpp"

namespace {

gou::Model reference_model() {
    gou::BrownianDriftParams p;
    p.gamma_xi = 1.0;
    p.gamma_eta = -0.05;
    p.cov_xx = 2.0;
    p.cov_yy = 0.0025;
    return gou::Model::validate(p);
}

void BM_BrownianSteps(benchmark::State& state) {
    const gou::Model m = reference_model();
    std::uint64_t path = 0;
    for (auto _ : state) {
        gou::PathStepper st(m, 1.0 / 256, gou::RandomStream(42, path++));
        while (st.step(1.0)) {
        }
        benchmark::DoNotOptimize(st.z());
    }
    state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_BrownianSteps);

void BM_Lundberg(benchmark::State& state) {
    const gou::Model m = reference_model();
    for (auto _ : state) {
        auto prof = gou::lundberg_and_profile(m);
        benchmark::DoNotOptimize(prof.w);
    }
}
BENCHMARK(BM_Lundberg);

void BM_FenchelLegendre(benchmark::State& state) {
    const gou::Model m = reference_model();
    double v = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gou::fenchel_legendre(m, v));
        v += 0.01;
        if (v > 4.0) v = 0.1;
    }
}
BENCHMARK(BM_FenchelLegendre);

} // namespace

BENCHMARK_MAIN();
