#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "eqp/analytic_solution.hpp"
#include "eqp/euler_solver.hpp"
#include "eqp/verification.hpp"

using namespace eqp;

namespace {

constexpr double pi = std::numbers::pi;

const QuasiPeriodicSolution& solution() {
  static const auto sol = QuasiPeriodicSolution::assemble(
      ShearFlow::build({{pi / 2 - 1, pi / 2 + 1}, {3 * pi / 2 - 1, 3 * pi / 2 + 1}}, {38.0, -38.0}),
      {make_default_profile({pi / 2, 1.0}, 0.48, 0.4), make_default_profile({3 * pi / 2, 4.0}, 0.48, 0.4)});
  return sol;
}

std::size_t grid_size(const benchmark::State& state) { return static_cast<std::size_t>(state.range(0)); }

}  // namespace

static void BM_FftRoundTrip(benchmark::State& state) {
  const TorusGrid grid(grid_size(state));
  SpectralOps ops(grid);
  const auto f = solution().vorticity(0.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(ops.inverse(ops.forward(f)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_FftRoundTrip)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

static void BM_PoissonBracket(benchmark::State& state) {
  const TorusGrid grid(grid_size(state));
  SpectralOps ops(grid);
  const auto w = solution().vorticity(0.0, grid);
  const auto psi = solution().stream(0.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(ops.poisson_bracket(psi, w));
}
BENCHMARK(BM_PoissonBracket)->Arg(128)->Arg(256)->Arg(512);

static void BM_Rhs(benchmark::State& state) {
  const TorusGrid grid(grid_size(state));
  EulerSolver solver(grid);
  const auto w = solution().vorticity(0.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(solver.rhs(w));
}
BENCHMARK(BM_Rhs)->Arg(128)->Arg(256);

static void BM_Rk4Step(benchmark::State& state) {
  const TorusGrid grid(grid_size(state));
  EulerSolver solver(grid);
  SolverState s{0.0, solution().vorticity(0.0, grid), 0};
  for (auto _ : state) s = solver.step_rk4(s, 1e-3);
}
BENCHMARK(BM_Rk4Step)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_AssembleVorticity(benchmark::State& state) {
  const TorusGrid grid(256);
  const auto workers = static_cast<unsigned>(state.range(0));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solution().vorticity(t, grid, workers));
    t += 1e-3;
  }
}
BENCHMARK(BM_AssembleVorticity)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_PdeResidual(benchmark::State& state) {
  SpectralOps ops(TorusGrid(256));
  for (auto _ : state) benchmark::DoNotOptimize(pde_residual(solution(), 0.37, ops));
}
BENCHMARK(BM_PdeResidual)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
