#include "lev/lrd_tests.hpp"
#include "lev/rescaled_cov.hpp"
#include "lev/spectral.hpp"
#include "lev/synthetic.hpp"
#include "lev/xcorr.hpp"

#include <benchmark/benchmark.h>

namespace {

std::vector<double> input(std::size_t n) { return lev::gen_fgn(0.8, n, 1); }

void BM_Periodogram(benchmark::State& state) {
    const auto x = input(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lev::periodogram(x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Periodogram)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_LocalWhittle(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = lev::periodogram(input(n));
    const auto m = lev::bandwidth(n);
    for (auto _ : state) benchmark::DoNotOptimize(lev::local_whittle(p, m));
}
BENCHMARK(BM_LocalWhittle)->Arg(3400)->Arg(1 << 14);

void BM_Gph(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = lev::periodogram(input(n));
    for (auto _ : state) benchmark::DoNotOptimize(lev::gph(p, lev::bandwidth(n)));
}
BENCHMARK(BM_Gph)->Arg(3400)->Arg(1 << 14);

void BM_Hac(benchmark::State& state) {
    const auto x = input(3400);
    const auto q = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lev::hac_covariance(x, x, q));
}
BENCHMARK(BM_Hac)->Arg(2)->Arg(20)->Arg(200);

void BM_RhoDcca(benchmark::State& state) {
    const auto [x, y] = lev::gen_correlated_pair(0.5, 0.9, 0.2, static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(lev::rho_dcca(x, y, 20));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RhoDcca)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_RhoDmca(benchmark::State& state) {
    const auto [x, y] = lev::gen_correlated_pair(0.5, 0.9, 0.2, static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(lev::rho_dmca(x, y, 20));
}
BENCHMARK(BM_RhoDmca)->Arg(3400)->Arg(1 << 14);

void BM_Surrogate(benchmark::State& state) {
    const auto x = input(static_cast<std::size_t>(state.range(0)));
    lev::FourierSurrogate gen(x);
    std::vector<double> out;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        gen.generate(seed++, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_Surrogate)->Arg(3400)->Arg(1 << 14);

void BM_SurrogatePvalue(benchmark::State& state) {
    const auto [x, y] = lev::gen_correlated_pair(0.5, 0.9, 0.0, 3400, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lev::surrogate_pvalue(x, y, lev::XCorrMethod::Dcca, 20, 1000, 7));
    }
}
BENCHMARK(BM_SurrogatePvalue)->Unit(benchmark::kMillisecond);

void BM_RctBootstrap(benchmark::State& state) {
    const auto x = lev::gen_fgn(0.5, 3400, 4);
    const auto y = lev::gen_fgn(0.9, 3400, 5);
    lev::RctConfig cfg;
    cfg.lag = 18;
    cfg.replicas = 1000;
    for (auto _ : state) benchmark::DoNotOptimize(lev::rct_pvalue(x, y, cfg));
}
BENCHMARK(BM_RctBootstrap)->Unit(benchmark::kMillisecond);

void BM_Fgn(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(lev::gen_fgn(0.8, static_cast<std::size_t>(state.range(0)), seed++));
}
BENCHMARK(BM_Fgn)->Arg(4096)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
