#pragma once

#include <numbers>
#include <vector>

#include "eqp/analytic_solution.hpp"

namespace fixture {

inline constexpr double pi = std::numbers::pi;

inline eqp::ShearFlow default_flow() {
  return eqp::ShearFlow::build({{pi / 2 - 1, pi / 2 + 1}, {3 * pi / 2 - 1, 3 * pi / 2 + 1}}, {38.0, -38.0});
}

inline std::vector<eqp::RadialProfile> default_profiles(double amplitude = 0.4) {
  return {eqp::make_default_profile({pi / 2, 1.0}, 0.48, amplitude),
          eqp::make_default_profile({3 * pi / 2, 4.0}, 0.48, amplitude)};
}

inline eqp::QuasiPeriodicSolution default_solution() {
  return eqp::QuasiPeriodicSolution::assemble(default_flow(), default_profiles());
}

/// The narrow two-strip flow used in the shear_flow examples.
inline eqp::ShearFlow narrow_flow() {
  return eqp::ShearFlow::build({{pi / 2 - 0.3, pi / 2 + 0.3}, {3 * pi / 2 - 0.3, 3 * pi / 2 + 0.3}}, {1.0, -1.0});
}

inline eqp::ShearFlow zero_flow() { return eqp::ShearFlow::build({{0.1, 6.1}}, {0.0}); }

}  // namespace fixture
