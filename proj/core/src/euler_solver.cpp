#include "eqp/euler_solver.hpp"

#include <cmath>
#include <sstream>

#include "eqp/error.hpp"

namespace eqp {

EulerSolver::EulerSolver(TorusGrid grid) : ops_(grid) {}

ScalarField EulerSolver::rhs(const ScalarField& omega) {
  const double mean = omega.mean();
  if (std::abs(mean) > 1e-10 * omega.max_abs()) {
    std::ostringstream os;
    os << "vorticity must have zero mean; measured mean " << mean;
    throw ValidationError(os.str());
  }
  const auto omega_hat = ops_.forward(omega);
  auto psi_hat = omega_hat;
  ops_.apply_inverse_laplacian(psi_hat);
  auto out = ops_.inverse(ops_.poisson_bracket(psi_hat, omega_hat));
  out *= -1.0;
  return out;
}

SolverState EulerSolver::step_rk4(const SolverState& state, double dt) {
  const ScalarField& w = state.omega;
  const ScalarField k1 = rhs(w);
  ScalarField stage = w;
  const ScalarField k2 = rhs(stage.add_scaled(0.5 * dt, k1));
  stage = w;
  const ScalarField k3 = rhs(stage.add_scaled(0.5 * dt, k2));
  stage = w;
  const ScalarField k4 = rhs(stage.add_scaled(dt, k3));

  SolverState next{state.t + dt, w, state.step + 1};
  auto out = next.omega.values();
  auto a = k1.values();
  auto b = k2.values();
  auto c = k3.values();
  auto d = k4.values();
  const double h6 = dt / 6.0;
  for (std::size_t q = 0; q < out.size(); ++q) out[q] += h6 * (a[q] + 2.0 * (b[q] + c[q]) + d[q]);

  if (!next.omega.all_finite()) {
    throw RuntimeAbort("non-finite vorticity after step " + std::to_string(next.step), next.step);
  }
  return next;
}

Diagnostics EulerSolver::compute_diagnostics(const ScalarField& omega, double t) {
  Diagnostics d;
  d.t = t;
  d.mean_omega = omega.mean();
  const double area = grid().spacing() * grid().spacing();
  if (omega.max_abs() == 0.0) return d;

  const ScalarField psi = ops_.inverse_laplacian_zero_mean(omega);
  auto w = omega.values();
  auto p = psi.values();
  double e = 0.0;
  double z = 0.0;
  double c3 = 0.0;
  for (std::size_t q = 0; q < w.size(); ++q) {
    e += p[q] * w[q];
    z += w[q] * w[q];
    c3 += w[q] * w[q] * w[q];
  }
  d.energy = -0.5 * e * area;
  d.enstrophy = 0.5 * z * area;
  d.casimir3 = c3 * area;

  const auto [ux, uy] = ops_.velocity_from_stream(psi);
  auto a = ux.values();
  auto b = uy.values();
  double umax = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) umax = std::max(umax, std::hypot(a[q], b[q]));
  d.max_velocity = umax;
  return d;
}

double EulerSolver::cfl_number(const ScalarField& omega, double dt) {
  return compute_diagnostics(omega).max_velocity * dt / grid().spacing();
}

RunResult EulerSolver::run(const SolverConfig& config, ScalarField initial, const Observer& observer) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw ValidationError("dt must be positive");
  if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end)) throw ValidationError("t_end must be >= 0");
  if (!(initial.grid() == grid())) throw ValidationError("initial field grid does not match the solver grid");

  std::vector<Diagnostics> series;
  SolverState state{0.0, std::move(initial), 0};
  Diagnostics first = compute_diagnostics(state.omega, 0.0);
  const double cfl = first.max_velocity * config.dt / grid().spacing();
  if (cfl > config.cfl_cap && !config.allow_cfl_violation) {
    std::ostringstream os;
    os << "time step violates the CFL cap: max|u| dt / dx = " << cfl << " > " << config.cfl_cap;
    throw ValidationError(os.str());
  }
  series.push_back(first);
  if (observer) observer(state, first);

  const auto steps = static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9));
  for (std::size_t s = 0; s < steps; ++s) {
    const double t_next = s + 1 == steps ? config.t_end : static_cast<double>(s + 1) * config.dt;
    state = step_rk4(state, t_next - state.t);
    state.t = t_next;
    const bool last = s + 1 == steps;
    const bool strided = config.snapshot_stride > 0 && state.step % config.snapshot_stride == 0;
    if (last || strided) {
      const Diagnostics d = compute_diagnostics(state.omega, state.t);
      series.push_back(d);
      if (observer) observer(state, d);
    }
  }
  return RunResult{std::move(state), std::move(series)};
}

}  // namespace eqp
