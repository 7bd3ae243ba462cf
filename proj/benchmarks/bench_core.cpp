#include <benchmark/benchmark.h>

#include "nsl/grid.hpp"
#include "nsl/initial_data.hpp"
#include "nsl/lorentz.hpp"
#include "nsl/mild.hpp"
#include "nsl/rearrangement.hpp"
#include "nsl/singular.hpp"

namespace {

void BM_transform_roundtrip(benchmark::State& state) {
  nsl::Grid g(2, static_cast<int>(state.range(0)), 2.0 * 3.14159265358979323846);
  nsl::ScalarField f = nsl::random_band_limited(g, g.points_per_axis() / 4, 7);
  for (auto _ : state) {
    auto F = nsl::transform(f);
    auto back = nsl::inverse_transform(F);
    benchmark::DoNotOptimize(back.v.data());
  }
}
BENCHMARK(BM_transform_roundtrip)->Arg(64)->Arg(128);

void BM_lorentz_norm(benchmark::State& state) {
  nsl::Grid g(2, static_cast<int>(state.range(0)), 1.0);
  nsl::ScalarField f = nsl::random_band_limited(g, g.points_per_axis() / 4, 11);
  const auto r = nsl::rearrangement(f);
  const nsl::LorentzIndex idx(2.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nsl::lorentz_norm(r, idx));
  }
}
BENCHMARK(BM_lorentz_norm)->Arg(64)->Arg(128);

void BM_leray_project(benchmark::State& state) {
  nsl::Grid g(2, static_cast<int>(state.range(0)), 1.0);
  nsl::VectorField u = nsl::random_solenoidal(g, g.points_per_axis() / 4, 1.0, 3);
  for (auto _ : state) {
    auto v = nsl::leray_project(u);
    benchmark::DoNotOptimize(v.comp[0].v.data());
  }
}
BENCHMARK(BM_leray_project)->Arg(64)->Arg(128);

void BM_solver_step(benchmark::State& state) {
  nsl::Grid g(2, static_cast<int>(state.range(0)), 2.0 * 3.14159265358979323846);
  nsl::VectorField f = nsl::taylor_green(g);
  nsl::SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 1e-3;
  for (auto _ : state) {
    auto traj = nsl::solve_mild(f, cfg);
    benchmark::DoNotOptimize(traj.states.back().comp[0].v.data());
  }
}
BENCHMARK(BM_solver_step)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
