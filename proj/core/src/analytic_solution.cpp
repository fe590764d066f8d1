#include "eqp/analytic_solution.hpp"

#include <cmath>
#include <cstdlib>

#include "eqp/error.hpp"
#include "eqp/parallel.hpp"

namespace eqp {

QuasiPeriodicSolution QuasiPeriodicSolution::assemble(ShearFlow flow, std::vector<RadialProfile> profiles) {
  const std::size_t strips = flow.strip_count();
  if (!profiles.empty() && profiles.size() != strips) {
    throw ValidationError("expected one profile per strip: " + std::to_string(strips) + " strips, " +
                          std::to_string(profiles.size()) + " profiles");
  }
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const auto& strip = flow.strips()[k];
    if (!check_support_fits(profiles[k], strip)) {
      throw ValidationError("profile " + std::to_string(k) + " support radius " +
                            std::to_string(profiles[k].support_radius()) + " leaks out of strip " +
                            std::to_string(k) + " [" + std::to_string(strip.a) + ", " + std::to_string(strip.b) +
                            "]");
    }
  }
  std::vector<double> velocities;
  if (!profiles.empty()) velocities = flow.velocities();
  return QuasiPeriodicSolution(std::move(flow), std::move(profiles), std::move(velocities));
}

QuasiPeriodicSolution QuasiPeriodicSolution::with_velocities(std::vector<double> velocities) const {
  if (velocities.size() != profiles_.size()) {
    throw ValidationError("velocity override needs " + std::to_string(profiles_.size()) + " entries");
  }
  return QuasiPeriodicSolution(flow_, profiles_, std::move(velocities));
}

double QuasiPeriodicSolution::shift(std::size_t k, double t) const { return wrap_angle(velocities_.at(k) * t); }

ScalarField QuasiPeriodicSolution::assemble_field(ProfileField which, double t, const TorusGrid& grid,
                                                  unsigned workers) const {
  const auto order = which == ProfileField::stream ? BackgroundOrder::stream : BackgroundOrder::vorticity;
  std::vector<double> shifts(profiles_.size());
  for (std::size_t k = 0; k < profiles_.size(); ++k) shifts[k] = shift(k, t);

  ScalarField out(grid);
  const std::size_t n = grid.n();
  parallel_for(n, workers, [&](std::size_t i) {
    const double x = grid.node(i);
    const double background = flow_.eval(x, order);
    for (std::size_t j = 0; j < n; ++j) out(i, j) = background;
    for (std::size_t k = 0; k < profiles_.size(); ++k) {
      const auto& p = profiles_[k];
      if (std::abs(torus_displacement(x - p.center().x)) >= p.support_radius()) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += p.eval(which, x, grid.node(j), shifts[k]);
    }
  });
  return out;
}

ScalarField QuasiPeriodicSolution::vorticity(double t, const TorusGrid& grid, unsigned workers) const {
  return assemble_field(ProfileField::vorticity, t, grid, workers);
}

ScalarField QuasiPeriodicSolution::stream(double t, const TorusGrid& grid, unsigned workers) const {
  return assemble_field(ProfileField::stream, t, grid, workers);
}

ScalarField QuasiPeriodicSolution::traveling_vorticity(std::size_t k, double t, const TorusGrid& grid) const {
  const auto& p = profiles_.at(k);
  const double s = shift(k, t);
  return ScalarField::sample(grid, [&](double x, double y) { return p.eval(ProfileField::vorticity, x, y, s); });
}

ScalarField QuasiPeriodicSolution::traveling_stream(std::size_t k, double t, const TorusGrid& grid) const {
  const auto& p = profiles_.at(k);
  const double s = shift(k, t);
  return ScalarField::sample(grid, [&](double x, double y) { return p.eval(ProfileField::stream, x, y, s); });
}

bool commensurate(double a, double b, int max_denominator, double tol) {
  if (a == 0.0 && b == 0.0) return true;
  if (a == 0.0 || b == 0.0) return false;
  const double scale = std::max(std::abs(a), std::abs(b));
  for (int q = 1; q <= max_denominator; ++q) {
    const double p = std::round(q * a / b);
    if (p == 0.0 || std::abs(p) > max_denominator) continue;
    if (std::abs(q * a - p * b) <= tol * scale) return true;
  }
  return false;
}

FrequencyReport QuasiPeriodicSolution::frequencies() const {
  FrequencyReport report;
  report.velocities = velocities_;
  for (double v : velocities_) {
    report.periods.push_back(v == 0.0 ? std::numeric_limits<double>::infinity() : kTwoPi / std::abs(v));
  }
  for (std::size_t j = 0; j < velocities_.size(); ++j) {
    for (std::size_t k = j + 1; k < velocities_.size(); ++k) {
      if (commensurate(velocities_[j], velocities_[k])) report.commensurate_pairs.emplace_back(j, k);
    }
  }
  return report;
}

QuasiPeriodicSolution assemble(ShearFlow flow, std::vector<RadialProfile> profiles) {
  return QuasiPeriodicSolution::assemble(std::move(flow), std::move(profiles));
}

}  // namespace eqp
