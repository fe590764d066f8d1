#include "eqp/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eqp/error.hpp"

namespace eqp {

double spectral_tolerance(double laplacian_residual) {
  return std::max(kSpectralToleranceFloor, 10.0 * laplacian_residual);
}

double gradient_max(const ScalarField& f, SpectralOps& ops) {
  const auto s = ops.forward(f);
  SpectrumField sx = s;
  SpectrumField sy = s;
  ops.differentiate(sx, Axis::x);
  ops.differentiate(sy, Axis::y);
  return std::max(ops.inverse(sx).max_abs(), ops.inverse(sy).max_abs());
}

double bracket_residual(const ScalarField& f, const ScalarField& g, SpectralOps& ops) {
  const double scale = gradient_max(f, ops) * gradient_max(g, ops);
  if (scale == 0.0) return 0.0;
  return ops.poisson_bracket(f, g).max_abs() / scale;
}

ScalarField sample_profile(const RadialProfile& profile, ProfileField which, const TorusGrid& grid, double shift) {
  return ScalarField::sample(grid, [&](double x, double y) { return profile.eval(which, x, y, shift); });
}

double stationarity_residual(const RadialProfile& profile, SpectralOps& ops) {
  const auto& grid = ops.grid();
  return bracket_residual(sample_profile(profile, ProfileField::stream, grid),
                          sample_profile(profile, ProfileField::vorticity, grid), ops);
}

double laplacian_consistency(const RadialProfile& profile, SpectralOps& ops) {
  const auto& grid = ops.grid();
  const ScalarField omega = sample_profile(profile, ProfileField::vorticity, grid);
  const double norm = omega.l2_norm();
  if (norm == 0.0) return 0.0;
  ScalarField diff = ops.laplacian(sample_profile(profile, ProfileField::stream, grid));
  diff -= omega;
  return diff.l2_norm() / norm;
}

FieldPair make_non_radial_control(const RadialProfile& profile, SpectralOps& ops, double aspect) {
  const auto c = profile.center();
  ScalarField psi = ScalarField::sample(ops.grid(), [&](double x, double y) {
    const double dx = torus_displacement(x - c.x) / aspect;
    const double dy = torus_displacement(y - c.y);
    return profile.psi(0.5 * (dx * dx + dy * dy));
  });
  ScalarField omega = ops.laplacian(psi);
  return {std::move(psi), std::move(omega)};
}

Matrix2 action_angle_jacobian(double r, double theta) {
  if (!(r > 0.0)) throw ValidationError("action-angle chart is singular at r <= 0");
  const double s = std::sqrt(2.0 * r);
  return {{{std::cos(theta) / s, std::sin(theta) / s}, {-s * std::sin(theta), s * std::cos(theta)}}};
}

double symplectic_jacobian_check(std::span<const ActionAngle> samples) {
  constexpr Matrix2 J = {{{0.0, -1.0}, {1.0, 0.0}}};
  double worst = 0.0;
  for (const auto& sample : samples) {
    const Matrix2 M = action_angle_jacobian(sample.r, sample.theta);
    Matrix2 JM{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) JM[i][j] = J[i][0] * M[0][j] + J[i][1] * M[1][j];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double mtjm = M[0][i] * JM[0][j] + M[1][i] * JM[1][j];
        worst = std::max(worst, std::abs(mtjm - J[i][j]));
      }
    }
  }
  return worst;
}

double cross_term_residual(const QuasiPeriodicSolution& solution, std::size_t j, std::size_t k, SpectralOps& ops) {
  if (j == k) throw std::invalid_argument("cross_term_residual needs j != k; use stationarity_residual for j == k");
  const auto& grid = ops.grid();
  return bracket_residual(solution.traveling_stream(j, 0.0, grid), solution.traveling_vorticity(k, 0.0, grid), ops);
}

double cross_term_residual(const RadialProfile& stream_profile, const RadialProfile& vorticity_profile,
                           SpectralOps& ops) {
  const auto& grid = ops.grid();
  return bracket_residual(sample_profile(stream_profile, ProfileField::stream, grid),
                          sample_profile(vorticity_profile, ProfileField::vorticity, grid), ops);
}

double pde_residual(const QuasiPeriodicSolution& solution, double t, SpectralOps& ops) {
  const auto& grid = ops.grid();
  const ScalarField psi = solution.stream(t, grid);
  const ScalarField omega = solution.vorticity(t, grid);

  SpectrumField residual = ops.poisson_bracket(ops.forward(psi), ops.forward(omega));
  for (std::size_t k = 0; k < solution.mode_count(); ++k) {
    auto chi = ops.forward(solution.traveling_vorticity(k, t, grid));
    ops.differentiate(chi, Axis::y);
    ops.truncate(chi);
    const double v = solution.velocities()[k];
    auto dst = residual.coeffs();
    auto src = chi.coeffs();
    for (std::size_t q = 0; q < dst.size(); ++q) dst[q] -= v * src[q];
  }
  const double scale = gradient_max(psi, ops) * gradient_max(omega, ops);
  if (scale == 0.0) return 0.0;
  return ops.inverse(residual).max_abs() / scale;
}

EvolutionError evolution_error(const QuasiPeriodicSolution& solution, const ScalarField& omega, double t,
                               unsigned workers) {
  const ScalarField exact = solution.vorticity(t, omega.grid(), workers);
  ScalarField diff = omega;
  diff -= exact;
  EvolutionError e{t, 0.0, 0.0};
  const double l2 = exact.l2_norm();
  const double linf = exact.max_abs();
  e.l2 = l2 > 0.0 ? diff.l2_norm() / l2 : diff.l2_norm();
  e.linf = linf > 0.0 ? diff.max_abs() / linf : diff.max_abs();
  return e;
}

std::vector<EvolutionError> evolution_error(const QuasiPeriodicSolution& solution,
                                            std::span<const SolverState> states, unsigned workers) {
  std::vector<EvolutionError> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(evolution_error(solution, s.omega, s.t, workers));
  return out;
}

double quasi_period_time(const QuasiPeriodicSolution& solution, std::size_t k, std::size_t n, std::size_t cells) {
  const double v = std::abs(solution.velocities().at(k));
  if (v == 0.0) throw ValidationError("strip " + std::to_string(k) + " has zero velocity; no travel time");
  return static_cast<double>(cells) * kTwoPi / (static_cast<double>(n) * v);
}

double quasi_period_check(const QuasiPeriodicSolution& solution, std::size_t k, const ScalarField& omega_initial,
                          const ScalarField& omega_at, double t, std::optional<double> velocity) {
  const auto& grid = omega_initial.grid();
  if (!(omega_at.grid() == grid)) throw ValidationError("quasi-period check fields live on different grids");
  const std::size_t n = grid.n();
  const double v = velocity.value_or(solution.velocities().at(k));
  const double cells = v * t / grid.spacing();
  if (std::abs(cells - std::round(cells)) > 1e-6) {
    throw ValidationError("shift v t = " + std::to_string(v * t) + " is not a whole number of grid cells");
  }
  const auto nn = static_cast<long>(n);
  const long shift = ((static_cast<long>(std::llround(cells)) % nn) + nn) % nn;
  const auto& strip = solution.flow().strips().at(k);

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.node(i);
    if (!(x > strip.a && x < strip.b)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const auto src = static_cast<std::size_t>((static_cast<long>(j) - shift + nn) % nn);
      worst = std::max(worst, std::abs(omega_at(i, j) - omega_initial(i, src)));
    }
  }
  const double amplitude = solution.traveling_vorticity(k, 0.0, grid).max_abs();
  return amplitude > 0.0 ? worst / amplitude : worst;
}

bool VerificationReport::all_passed() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.passed; });
}

void VerificationReport::add(std::string name, std::size_t n, double residual, double tolerance,
                             bool negative_control) {
  const bool passed = negative_control ? residual >= kNegativeControlMargin * tolerance : residual <= tolerance;
  records.push_back({std::move(name), n, residual, tolerance, passed, negative_control});
}

namespace {

std::string indexed(const std::string& name, std::size_t k) { return name + "[" + std::to_string(k) + "]"; }

double relative_mean(const ScalarField& f) {
  const double m = f.max_abs();
  return m > 0.0 ? std::abs(f.mean()) / m : 0.0;
}

std::vector<ActionAngle> symplectic_samples() {
  // Deterministic quasi-random samples, r in (0.01, 2), theta in [0, 2pi).
  std::vector<ActionAngle> out;
  constexpr double golden = 0.6180339887498949;
  constexpr double plastic = 0.7548776662466927;
  for (int s = 1; s <= 100; ++s) {
    const double u = std::fmod(s * golden, 1.0);
    const double w = std::fmod(s * plastic, 1.0);
    out.push_back({0.01 + 1.99 * u, kTwoPi * w});
  }
  return out;
}

bool non_increasing(std::span<const double> values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) return false;
  }
  return true;
}

}  // namespace

VerificationReport run_verification_suite(const ShearFlow& flow, const std::vector<RadialProfile>& profiles,
                                          const SuiteOptions& options) {
  VerificationReport report;
  const TorusGrid grid(options.n);
  const std::size_t n = grid.n();

  bool fits = true;
  for (std::size_t k = 0; k < profiles.size() && k < flow.strip_count(); ++k) {
    const bool ok = check_support_fits(profiles[k], flow.strips()[k]);
    const double margin = std::min(profiles[k].center().x - flow.strips()[k].a,
                                   flow.strips()[k].b - profiles[k].center().x);
    report.records.push_back({indexed("support_fits", k), n, profiles[k].support_radius(),
                              std::min(margin, std::numbers::pi), ok, false});
    fits = fits && ok;
  }
  if (!fits) return report;

  const auto solution = QuasiPeriodicSolution::assemble(flow, profiles);
  SpectralOps ops(grid);

  // Construction identities per profile.
  double lap_worst = 0.0;
  std::vector<double> lap(profiles.size());
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    lap[k] = laplacian_consistency(profiles[k], ops);
    lap_worst = std::max(lap_worst, lap[k]);
    report.add(indexed("laplacian_consistency", k), n, lap[k], kConstructionTolerance);
  }
  const double tol = spectral_tolerance(lap_worst);
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    report.add(indexed("stationarity", k), n, stationarity_residual(profiles[k], ops), spectral_tolerance(lap[k]));
    const auto control = make_non_radial_control(profiles[k], ops);
    report.add(indexed("stationarity_non_radial_control", k), n,
               bracket_residual(control.stream, control.vorticity, ops), spectral_tolerance(lap[k]), true);
  }

  // Grid refinement of the construction residuals.
  if (n / 4 >= 16 && n % 4 == 0) {
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      std::vector<double> lap_series;
      std::vector<double> stat_series;
      for (std::size_t m : {n / 4, n / 2, n}) {
        SpectralOps coarse(TorusGrid{m});
        lap_series.push_back(laplacian_consistency(profiles[k], coarse));
        stat_series.push_back(stationarity_residual(profiles[k], coarse));
      }
      report.records.push_back({indexed("laplacian_refinement", k), n, lap_series.front(), lap_series.back(),
                                non_increasing(lap_series), false});
      report.records.push_back({indexed("stationarity_refinement", k), n, stat_series.front(), stat_series.back(),
                                non_increasing(stat_series), false});
    }
  }

  const auto samples = symplectic_samples();
  report.add("symplectic_jacobian", n, symplectic_jacobian_check(samples), kSymplecticTolerance);

  // Zero averages.
  {
    const auto background = [&](BackgroundOrder order) {
      return ScalarField::sample(grid, [&](double x, double) { return flow.eval(x, order); });
    };
    report.add("zero_mean.V", n, relative_mean(background(BackgroundOrder::stream)), kZeroMeanTolerance);
    report.add("zero_mean.dV", n, relative_mean(background(BackgroundOrder::velocity)), kZeroMeanTolerance);
    report.add("zero_mean.d2V", n, relative_mean(background(BackgroundOrder::vorticity)), kZeroMeanTolerance);
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      report.add(indexed("zero_mean.Omega", k), n,
                 relative_mean(sample_profile(profiles[k], ProfileField::vorticity, grid)), kZeroMeanTolerance);
      report.add(indexed("zero_mean.Psi", k), n,
                 relative_mean(sample_profile(profiles[k], ProfileField::stream, grid)), kZeroMeanTolerance);
    }
  }

  // Disjoint interaction.
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      if (j == k) continue;
      report.add("cross_term[" + std::to_string(j) + "," + std::to_string(k) + "]", n,
                 cross_term_residual(solution, j, k, ops), tol);
    }
  }
  if (!profiles.empty()) {
    const auto& p = profiles.front();
    const auto c = p.center();
    const auto overlapping = make_default_profile({c.x, c.y + 0.5 * p.support_radius()}, p.r_max(),
                                                  p.amplitude() == 0.0 ? 1.0 : p.amplitude());
    report.add("cross_term_overlap_control", n, cross_term_residual(p, overlapping, ops), tol, true);
  }

  for (double t : {0.0, 0.37, 1.0}) {
    report.add("pde_residual[t=" + std::to_string(t).substr(0, 4) + "]", n, pde_residual(solution, t, ops), tol);
  }

  if (!options.include_dynamics) return report;

  // Time evolution against the exact solution, with conservation.
  EulerSolver solver(grid);
  const ScalarField initial = solution.vorticity(0.0, grid, options.workers);
  SolverConfig config;
  config.dt = options.dt;
  config.t_end = options.t_end;
  config.snapshot_stride = 10;
  const auto run = solver.run(config, initial);
  const auto err = evolution_error(solution, run.final_state.omega, run.final_state.t, options.workers);
  report.add("evolution_l2[t=" + std::to_string(run.final_state.t) + "]", n, err.l2, kEvolutionTolerance);

  const auto& d0 = run.diagnostics.front();
  double mean_drift = 0.0;
  double energy_drift = 0.0;
  double enstrophy_drift = 0.0;
  for (const auto& d : run.diagnostics) {
    mean_drift = std::max(mean_drift, std::abs(d.mean_omega - d0.mean_omega));
    if (d0.energy != 0.0) energy_drift = std::max(energy_drift, std::abs(d.energy - d0.energy) / std::abs(d0.energy));
    if (d0.enstrophy != 0.0) {
      enstrophy_drift = std::max(enstrophy_drift, std::abs(d.enstrophy - d0.enstrophy) / d0.enstrophy);
    }
  }
  const double scale0 = initial.max_abs() > 0.0 ? initial.max_abs() : 1.0;
  report.add("mean_conservation", n, mean_drift / scale0, kMeanConservationTolerance);
  report.add("energy_drift", n, energy_drift, kInvariantDriftTolerance);
  report.add("enstrophy_drift", n, enstrophy_drift, kInvariantDriftTolerance);

  // Traveling-wave check per strip over one grid cell of travel; a strip at
  // rest is compared with its unshifted initial data.
  for (std::size_t k = 0; k < solution.mode_count(); ++k) {
    const double v = solution.velocities()[k];
    const double t_star = v != 0.0 ? quasi_period_time(solution, k, n, 1) : 0.05;
    SolverConfig short_run;
    short_run.t_end = t_star;
    short_run.dt = t_star / std::ceil(t_star / options.dt);
    const auto moved = solver.run(short_run, initial).final_state;
    report.add(indexed("quasi_period", k), n, quasi_period_check(solution, k, initial, moved.omega, t_star),
               kEvolutionTolerance);
    const double wrong = v != 0.0 ? -v : 4.0 * grid.spacing() / t_star;
    report.add(indexed("quasi_period_wrong_velocity_control", k), n,
               quasi_period_check(solution, k, initial, moved.omega, t_star, wrong), kEvolutionTolerance, true);
  }
  return report;
}

}  // namespace eqp
