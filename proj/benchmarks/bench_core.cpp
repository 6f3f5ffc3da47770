#include <benchmark/benchmark.h>

#include <cmath>

#include "els/diagnostics.hpp"
#include "els/director.hpp"
#include "els/grid.hpp"

namespace {

els::SolverConfig bump_config(double dt) {
    els::SolverConfig cfg;
    cfg.formulation = els::Formulation::VForm;
    cfg.dt = dt;
    cfg.t_end = dt;
    cfg.initial_data.phi0 = els::GaussianBump{1.0, 2.0, 0.5};
    return cfg;
}

void BM_BesselLaplacian(benchmark::State& state) {
    els::RadialGrid grid(20.0, static_cast<std::size_t>(state.range(0)));
    els::RadialField f(grid);
    for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
        f[j] = std::sin(grid.node(j));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(els::bessel_laplacian(f, els::AxisPolicy::Neumann));
    }
}
BENCHMARK(BM_BesselLaplacian)->Arg(2000)->Arg(8000);

void BM_DirectorStep(benchmark::State& state) {
    els::RadialGrid grid(20.0, static_cast<std::size_t>(state.range(0)));
    const double dt = 0.25 * grid.dr();
    auto cfg = bump_config(dt);
    auto st = els::init_state(cfg.initial_data, grid, cfg.dt);
    for (auto _ : state) {
        st = els::step(st, cfg);
    }
}
BENCHMARK(BM_DirectorStep)->Arg(2000)->Arg(8000);

void BM_EnergyDensity(benchmark::State& state) {
    els::RadialGrid grid(20.0, static_cast<std::size_t>(state.range(0)));
    auto cfg = bump_config(0.25 * grid.dr());
    auto st = els::init_state(cfg.initial_data, grid, cfg.dt);
    for (auto _ : state) {
        benchmark::DoNotOptimize(els::energy_density(st));
    }
}
BENCHMARK(BM_EnergyDensity)->Arg(2000)->Arg(8000);

}  // namespace

BENCHMARK_MAIN();
