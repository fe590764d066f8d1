#pragma once

#include <functional>

#include "eqp/jet.hpp"
#include "eqp/shear_flow.hpp"

namespace eqp {

/// Psi~ and its first two derivatives at r, as a Taylor jet.
using RadialExpansion = Jet<2>;

/// A radial stream function of the action variable r = rho^2 / 2.
using RadialFunction = std::function<RadialExpansion(double r)>;

/// Omega~(r) = 2 (Psi~'(r) + r Psi~''(r)), the Laplacian in action-angle
/// coordinates for a function of r alone.
double polar_laplacian(const RadialExpansion& psi, double r);

/// The same operator written as 2 d/dr (r Psi~'(r)). Must agree with
/// polar_laplacian to round-off.
double polar_laplacian_divergence_form(const RadialExpansion& psi, double r);

/// Lifts polar_laplacian to functions.
std::function<double(double)> polar_laplacian(RadialFunction psi);

struct TorusPoint {
  double x = 0.0;
  double y = 0.0;
};

enum class ProfileField { stream, vorticity };

/// Signed shortest displacement on the circle, in [-pi, pi).
double torus_displacement(double d);

/// Compactly supported radial vortex (Psi_k, Omega_k) centered on the torus.
class RadialProfile {
 public:
  /// psi_tilde must already include the amplitude and vanish with all
  /// derivatives at r_max. Throws ValidationError if r_max <= 0 or the
  /// amplitude is not finite.
  RadialProfile(TorusPoint center, double r_max, double amplitude, RadialFunction psi_tilde);

  TorusPoint center() const { return center_; }
  double r_max() const { return r_max_; }
  double amplitude() const { return amplitude_; }

  /// Euclidean support radius sqrt(2 r_max).
  double support_radius() const;

  /// Exactly zero for r >= r_max.
  RadialExpansion psi_expansion(double r) const;
  double psi(double r) const { return psi_expansion(r).value(); }
  double omega(double r) const;

  /// Value at (x, y - shift) on the torus.
  double eval(ProfileField which, double x, double y, double shift = 0.0) const;

  /// Action variable r of (x, y - shift) relative to the center.
  double action(double x, double y, double shift = 0.0) const;

 private:
  TorusPoint center_;
  double r_max_;
  double amplitude_;
  RadialFunction psi_tilde_;
};

/// Default family: Psi~ = A phi'(r) with
///   phi(r) = r^2 exp(-r / r0) C(r / r_max),  r0 = r_max / 40,
/// where C is a C-infinity step equal to 1 below 0.75 and 0 at 1. phi
/// vanishes at 0 and r_max, so Psi~ integrates to zero exactly.
RadialProfile make_default_profile(TorusPoint center, double r_max, double amplitude);

double eval_cartesian(const RadialProfile& profile, ProfileField which, double x, double y,
                      double shift = 0.0);

/// True iff sqrt(2 r_max) < min(x_k - a, b - x_k) and sqrt(2 r_max) < pi.
/// Throws ValidationError if the center lies outside (a, b).
bool check_support_fits(const RadialProfile& profile, const StripSpec& strip);

}  // namespace eqp
