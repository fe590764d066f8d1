#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "eqp/radial_profile.hpp"
#include "eqp/shear_flow.hpp"
#include "eqp/spectral.hpp"

namespace eqp {

struct FrequencyReport {
  std::vector<double> velocities;
  /// 2pi / |v_k|, infinity when v_k = 0.
  std::vector<double> periods;
  /// Pairs (j, k), j < k, with v_j / v_k = p / q for small integers.
  std::vector<std::pair<std::size_t, std::size_t>> commensurate_pairs;
};

/// omega(t) = V''(x) + sum_k Omega_k(x, y - v_k t),
/// psi(t)   = V(x)   + sum_k Psi_k(x, y - v_k t).
///
/// Time enters only through the shifts v_k t mod 2pi, so evaluation at any
/// t is exact. Immutable; evaluation is safe from several threads.
class QuasiPeriodicSolution {
 public:
  /// Either no profiles (pure shear state) or one profile per strip, profile
  /// k centered inside strip k with its support inside the strip. Throws
  /// ValidationError otherwise.
  static QuasiPeriodicSolution assemble(ShearFlow flow, std::vector<RadialProfile> profiles);

  const ShearFlow& flow() const { return flow_; }
  const std::vector<RadialProfile>& profiles() const { return profiles_; }
  const std::vector<double>& velocities() const { return velocities_; }
  std::size_t mode_count() const { return profiles_.size(); }

  /// Copy whose traveling terms move with the given velocities instead of
  /// the strip velocities. Used to replay recorded manifests and to build
  /// negative controls; the result is not a solution in general.
  QuasiPeriodicSolution with_velocities(std::vector<double> velocities) const;

  ScalarField vorticity(double t, const TorusGrid& grid, unsigned workers = 1) const;
  ScalarField stream(double t, const TorusGrid& grid, unsigned workers = 1) const;

  /// chi_k(t) = Omega_k(x, y - v_k t) alone.
  ScalarField traveling_vorticity(std::size_t k, double t, const TorusGrid& grid) const;
  /// Psi_k(x, y - v_k t) alone.
  ScalarField traveling_stream(std::size_t k, double t, const TorusGrid& grid) const;

  /// y-translation of term k at time t, reduced to [0, 2pi).
  double shift(std::size_t k, double t) const;

  FrequencyReport frequencies() const;

 private:
  QuasiPeriodicSolution(ShearFlow flow, std::vector<RadialProfile> profiles, std::vector<double> velocities)
      : flow_(std::move(flow)), profiles_(std::move(profiles)), velocities_(std::move(velocities)) {}

  ScalarField assemble_field(ProfileField which, double t, const TorusGrid& grid, unsigned workers) const;

  ShearFlow flow_;
  std::vector<RadialProfile> profiles_;
  std::vector<double> velocities_;
};

QuasiPeriodicSolution assemble(ShearFlow flow, std::vector<RadialProfile> profiles);

/// True if a / b is p / q with 1 <= |p|, q <= max_denominator to relative
/// tolerance tol. Two zeros count as commensurate; one zero does not.
bool commensurate(double a, double b, int max_denominator = 16, double tol = 1e-9);

}  // namespace eqp
