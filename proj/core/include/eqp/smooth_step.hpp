#pragma once

#include <cmath>

#include "eqp/jet.hpp"

namespace eqp {

namespace detail {

// exp(-1/t) for t > 0, identically zero (with all derivatives) otherwise.
template <typename T>
T flat_exp(const T& t) {
  if (value_of(t) <= 0.0) return constant_like<T>(0.0);
  using std::exp;
  return exp(-1.0 / t);
}

}  // namespace detail

/// C-infinity step: 1 for u <= 0, 0 for u >= 1, monotone in between.
/// Works on plain doubles and on Jet<D>.
template <typename T>
T smooth_step_down(const T& u) {
  if (value_of(u) <= 0.0) return constant_like<T>(1.0);
  if (value_of(u) >= 1.0) return constant_like<T>(0.0);
  const T a = detail::flat_exp(1.0 - u);
  const T b = detail::flat_exp(u);
  return a / (a + b);
}

}  // namespace eqp
