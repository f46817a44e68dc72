// Serial reference vs OpenMP kernels on the far-field grid sizes used by the
// experiment presets.

#include "bubblefield/levelset.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

namespace {

using namespace bubblefield::levelset;

LevelSetField bubbles_on(int n) {
    const Grid2D g = Grid2D::from_extent(n, 2 * n, 0.0, 0.0, 100.0, 200.0);
    std::vector<EllipseParams> es;
    for (int k = 0; k < 10; ++k) es.push_back({5.0, 7.0, {k % 2 ? 80.0 : 20.0, 20.0 + 20.0 * (k / 2)}});
    return init_bubbles(es, g);
}

const TransportParams kTransport{0.0, 1.0, 0.05, NormalTermSign::Pde};

void BM_TransportSerial(benchmark::State& state) {
    const auto f = bubbles_on(static_cast<int>(state.range(0)));
    const double dt = cfl_dt(f.grid, kTransport);
    for (auto _ : state) benchmark::DoNotOptimize(reference::step(f, kTransport, dt));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.u.size()));
}

void BM_TransportOpenMP(benchmark::State& state) {
    const auto f = bubbles_on(static_cast<int>(state.range(0)));
    const double dt = cfl_dt(f.grid, kTransport);
    LevelSetField out;
    for (auto _ : state) {
        step_into(f, out, kTransport, dt);
        benchmark::DoNotOptimize(out.u.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.u.size()));
    state.counters["threads"] = omp_get_max_threads();
}

LevelSetField cd_field(int n) {
    const double dr = 50.0 / n;
    Grid2D g = Grid2D::from_extent(n, 2 * n, 0.5 * dr, 0.0, 50.0 + 0.5 * dr, 200.0);
    LevelSetField f(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) f.at(i, j) = std::max(0.0, -bubble_quadratic({5.0, 5.0, {0.0, 50.0}}, g.x(i), g.y(j)) / 25.0);
    }
    return f;
}

const CylindricalParams kCd{1.0, 0.1, 0.1};

void BM_CylindricalSerial(benchmark::State& state) {
    const auto f = cd_field(static_cast<int>(state.range(0)));
    const double dt = cd_cfl_dt(f.grid, kCd);
    for (auto _ : state) benchmark::DoNotOptimize(reference::cd_cylindrical_step(f, kCd, dt));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.u.size()));
}

void BM_CylindricalOpenMP(benchmark::State& state) {
    const auto f = cd_field(static_cast<int>(state.range(0)));
    const double dt = cd_cfl_dt(f.grid, kCd);
    for (auto _ : state) benchmark::DoNotOptimize(cd_cylindrical_step(f, kCd, dt));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.u.size()));
    state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_TransportSerial)->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_TransportOpenMP)->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_CylindricalSerial)->Arg(100)->Arg(400);
BENCHMARK(BM_CylindricalOpenMP)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
