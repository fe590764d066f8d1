#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "eqp/spectral.hpp"

namespace eqp {

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  /// Upper bound on max|u| dt / dx checked at the start of a run.
  double cfl_cap = 0.5;
  /// Observer / diagnostics cadence in steps; 0 means first and last only.
  std::size_t snapshot_stride = 0;
  bool allow_cfl_violation = false;
};

struct SolverState {
  double t = 0.0;
  ScalarField omega;
  std::size_t step = 0;
};

/// Standard Euler integrals, by grid quadrature (exact for band-limited
/// fields).
struct Diagnostics {
  double t = 0.0;
  double energy = 0.0;     // -1/2 int psi omega
  double enstrophy = 0.0;  // 1/2 int omega^2
  double casimir3 = 0.0;   // int omega^3
  double mean_omega = 0.0;
  double max_velocity = 0.0;
};

using Observer = std::function<void(const SolverState&, const Diagnostics&)>;

struct RunResult {
  SolverState final_state;
  std::vector<Diagnostics> diagnostics;
};

/// Explicit RK4 pseudo-spectral integrator for
///   d_t omega = -{psi, omega},  Delta psi = omega.
/// Not shareable across threads mid-run.
class EulerSolver {
 public:
  explicit EulerSolver(TorusGrid grid);

  const TorusGrid& grid() const { return ops_.grid(); }
  SpectralOps& ops() { return ops_; }

  /// -{Delta^{-1} omega, omega} with the dealiased bracket. Throws
  /// ValidationError for a nonzero-mean input.
  ScalarField rhs(const ScalarField& omega);

  /// One classical RK4 step. Throws RuntimeAbort if the result is not
  /// finite.
  SolverState step_rk4(const SolverState& state, double dt);

  Diagnostics compute_diagnostics(const ScalarField& omega, double t = 0.0);

  /// max|u| dt / dx for the given vorticity.
  double cfl_number(const ScalarField& omega, double dt);

  /// Steps from `initial` to config.t_end; the last step is shortened to land
  /// on t_end exactly. The observer sees step 0, every snapshot_stride-th
  /// step and the final step, and a diagnostics row is recorded for each.
  /// Throws ValidationError on a CFL violation (unless allowed) and
  /// RuntimeAbort on blow-up.
  RunResult run(const SolverConfig& config, ScalarField initial, const Observer& observer = {});

 private:
  SpectralOps ops_;
};

}  // namespace eqp
