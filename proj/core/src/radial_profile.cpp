#include "eqp/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "eqp/error.hpp"
#include "eqp/smooth_step.hpp"

namespace eqp {

namespace {

constexpr double kDecayRatio = 40.0;  // r_max / r0
constexpr double kCutoffStart = 0.75;

}  // namespace

double polar_laplacian(const RadialExpansion& psi, double r) {
  return 2.0 * (psi.derivative(1) + r * psi.derivative(2));
}

double polar_laplacian_divergence_form(const RadialExpansion& psi, double r) {
  const Jet<1> flux = Jet<1>::variable(r) * psi.differentiate();
  return 2.0 * flux.derivative(1);
}

std::function<double(double)> polar_laplacian(RadialFunction psi) {
  return [psi = std::move(psi)](double r) { return polar_laplacian(psi(r), r); };
}

double torus_displacement(double d) {
  const double pi = std::numbers::pi;
  double w = std::fmod(d + pi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w - pi;
}

RadialProfile::RadialProfile(TorusPoint center, double r_max, double amplitude, RadialFunction psi_tilde)
    : center_(center), r_max_(r_max), amplitude_(amplitude), psi_tilde_(std::move(psi_tilde)) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw ValidationError("profile r_max must be positive and finite");
  }
  if (!std::isfinite(amplitude)) throw ValidationError("profile amplitude must be finite");
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) throw ValidationError("profile center must be finite");
}

double RadialProfile::support_radius() const { return std::sqrt(2.0 * r_max_); }

RadialExpansion RadialProfile::psi_expansion(double r) const {
  if (r >= r_max_ || r < 0.0) return {};
  return psi_tilde_(r);
}

double RadialProfile::omega(double r) const {
  if (r >= r_max_ || r < 0.0) return 0.0;
  return polar_laplacian(psi_tilde_(r), r);
}

double RadialProfile::action(double x, double y, double shift) const {
  const double dx = torus_displacement(x - center_.x);
  const double dy = torus_displacement(y - shift - center_.y);
  return 0.5 * (dx * dx + dy * dy);
}

double RadialProfile::eval(ProfileField which, double x, double y, double shift) const {
  const double r = action(x, y, shift);
  if (r >= r_max_) return 0.0;
  return which == ProfileField::stream ? psi(r) : omega(r);
}

RadialProfile make_default_profile(TorusPoint center, double r_max, double amplitude) {
  if (!(r_max > 0.0)) throw ValidationError("profile r_max must be positive");
  const double r0 = r_max / kDecayRatio;
  auto psi = [r_max, r0, amplitude](double r) -> RadialExpansion {
    if (amplitude == 0.0) return {};
    const auto rr = Jet<3>::variable(r);
    const auto cutoff = smooth_step_down((rr / r_max - kCutoffStart) / (1.0 - kCutoffStart));
    const auto phi = rr * rr * exp(-rr / r0) * cutoff;
    return phi.differentiate() * amplitude;
  };
  return RadialProfile(center, r_max, amplitude, std::move(psi));
}

double eval_cartesian(const RadialProfile& profile, ProfileField which, double x, double y, double shift) {
  return profile.eval(which, x, y, shift);
}

bool check_support_fits(const RadialProfile& profile, const StripSpec& strip) {
  const double xc = profile.center().x;
  if (!(xc > strip.a && xc < strip.b)) {
    throw ValidationError("profile center x = " + std::to_string(xc) + " lies outside its strip [" +
                          std::to_string(strip.a) + ", " + std::to_string(strip.b) + "]");
  }
  const double rho = profile.support_radius();
  return rho < std::min(xc - strip.a, strip.b - xc) && rho < std::numbers::pi;
}

}  // namespace eqp
