#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "skewprod/decompose.hpp"
#include "skewprod/rng.hpp"
#include "skewprod/scenarios.hpp"
#include "skewprod/stats.hpp"

using namespace skewprod;

namespace {

void BM_WienerIncrements(benchmark::State& state) {
    const Grid grid(1e-3, static_cast<std::size_t>(state.range(0)));
    std::uint64_t key = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wiener_increments(grid, 2, ++key));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_WienerIncrements)->Arg(1000)->Arg(10000);

void BM_QrDecompose(benchmark::State& state) {
    CounterRng rng(5);
    std::vector<Mat2> mats;
    while (mats.size() < 4096) {
        const Mat2 m(rng.next_normal(), rng.next_normal(), rng.next_normal(),
                     rng.next_normal());
        if (m.det() > 1e-3) mats.push_back(m);
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qr_decompose(mats[i++ & 4095]));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_QrDecompose);

void BM_MatrixDiffusionPath(benchmark::State& state) {
    const Grid grid(1e-3, 1000);
    std::uint64_t key = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            matrix_diffusion_path(Mat2::identity(), grid, ++key));
    }
    state.SetItemsProcessed(state.iterations() * grid.n_steps);
}
BENCHMARK(BM_MatrixDiffusionPath);

void BM_PlanarPipeline(benchmark::State& state) {
    const Grid grid(1e-3, 1000);
    const SamplePath<Vec2> path = planar_bm_path({1.0, 0.0}, grid, 7);
    for (auto _ : state) {
        const PlanarDecomposition dec = polar_decompose(path);
        const TimeChange tau = time_change_planar(dec.radius);
        benchmark::DoNotOptimize(dds_extract(dec.angle, tau));
    }
    state.SetItemsProcessed(state.iterations() * grid.n_steps);
}
BENCHMARK(BM_PlanarPipeline);

void BM_RealizedQv(benchmark::State& state) {
    const Grid grid(1e-4, static_cast<std::size_t>(state.range(0)));
    const SamplePath<double> path = scalar_bm_path(grid, 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(realized_qv(path));
    }
    state.SetItemsProcessed(state.iterations() * grid.n_steps);
}
BENCHMARK(BM_RealizedQv)->Arg(10000);

void BM_KsTwoSample(benchmark::State& state) {
    CounterRng rng(11);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = rng.next_normal();
    for (auto& v : b) v = rng.next_normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ks_two_sample(a, b, 0.01, "bench"));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_KsTwoSample)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
