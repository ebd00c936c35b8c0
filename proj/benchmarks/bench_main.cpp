#include <benchmark/benchmark.h>

#include <vector>

#include "scpim/analysis.hpp"
#include "scpim/engine.hpp"
#include "scpim/popcount.hpp"

using namespace scpim;

static void BM_PUnswitched(benchmark::State& state) {
    const MtjParams dev;
    double tau = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p_unswitched(dev, {79.0, tau}));
        tau += 1e-9;
    }
}
BENCHMARK(BM_PUnswitched);

static void BM_ApplyPulse(benchmark::State& state) {
    const bool noisy = state.range(1) != 0;
    VariationModel v;
    if (noisy) v = {0.05, 0.05, 0.0};
    RngStream rng(1);
    ArrayState a(1, static_cast<std::size_t>(state.range(0)), MtjParams{}, v, rng);
    for (auto _ : state) {
        a.preset();
        a.apply_pulse(a.full(), {80.0, 0.5}, v, rng);
        benchmark::DoNotOptimize(a.bit(0, 0));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyPulse)->Args({1024, 0})->Args({1024, 1})->Args({65536, 0});

static ArrayState random_plane(std::size_t rows, std::size_t cols) {
    RngStream rng(2);
    ArrayState a(rows, cols, MtjParams{}, {}, rng);
    a.preset();
    a.apply_pulse(a.full(), {80.0, 0.7}, {}, rng);
    return a;
}

static void BM_PopcountApc(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const ArrayState a = random_plane(m, 1024);
    for (auto _ : state)
        for (std::size_t i = 0; i < m; ++i)
            benchmark::DoNotOptimize(popcount_apc(a, Region{i, 0, 1, 1024}).count);
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1024);
}
BENCHMARK(BM_PopcountApc)->Arg(1)->Arg(100);

static void BM_PopcountCsaFa(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const ArrayState a = random_plane(m, 1024);
    std::vector<Region> batch;
    for (std::size_t i = 0; i < m; ++i) batch.push_back(Region{i, 0, 1, 1024});
    for (auto _ : state) benchmark::DoNotOptimize(popcount_csa_fa(a, batch).counts.data());
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1024);
}
BENCHMARK(BM_PopcountCsaFa)->Arg(1)->Arg(100);

static void BM_ScMultiply(benchmark::State& state) {
    MulConfig cfg;
    cfg.nbit = static_cast<std::size_t>(state.range(0));
    RngStream rng(3);
    const Operand x = Operand::from_fraction(0.6, 10), y = Operand::from_fraction(0.7, 10);
    for (auto _ : state) benchmark::DoNotOptimize(sc_multiply(x, y, cfg, rng).count);
}
BENCHMARK(BM_ScMultiply)->Arg(1024)->Arg(1 << 16);

static void BM_McErrorDistribution(benchmark::State& state) {
    McConfig c;
    c.iterations = 100;
    c.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mc_error_distribution(c).sample_std);
}
BENCHMARK(BM_McErrorDistribution)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
