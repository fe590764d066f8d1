#pragma once

// Truncated Taylor arithmetic. A Jet<D> holds the first D+1 Taylor
// coefficients of a function around a point, so derivatives of closed-form
// radial profiles come out exact to round-off without hand-expanded formulas.

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace eqp {

template <std::size_t D>
struct Jet {
  std::array<double, D + 1> c{};

  static constexpr Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }

  /// The independent variable expanded around x.
  static constexpr Jet variable(double x) {
    Jet j;
    j.c[0] = x;
    if constexpr (D >= 1) j.c[1] = 1.0;
    return j;
  }

  constexpr double value() const { return c[0]; }

  /// n-th derivative at the expansion point.
  constexpr double derivative(std::size_t n) const {
    double factorial = 1.0;
    for (std::size_t k = 2; k <= n; ++k) factorial *= static_cast<double>(k);
    return c[n] * factorial;
  }

  /// Expansion of the first derivative, one order lower.
  constexpr Jet<D - 1> differentiate() const
    requires(D >= 1)
  {
    Jet<D - 1> out;
    for (std::size_t k = 0; k < D; ++k) out.c[k] = static_cast<double>(k + 1) * c[k + 1];
    return out;
  }

  template <std::size_t E>
  constexpr Jet<E> truncate() const
    requires(E <= D)
  {
    Jet<E> out;
    for (std::size_t k = 0; k <= E; ++k) out.c[k] = c[k];
    return out;
  }

  constexpr Jet operator-() const {
    Jet out;
    for (std::size_t k = 0; k <= D; ++k) out.c[k] = -c[k];
    return out;
  }
  constexpr Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k <= D; ++k) c[k] += o.c[k];
    return *this;
  }
  constexpr Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k <= D; ++k) c[k] -= o.c[k];
    return *this;
  }
  constexpr Jet& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
};

template <std::size_t D>
constexpr Jet<D> operator+(Jet<D> a, const Jet<D>& b) { return a += b; }
template <std::size_t D>
constexpr Jet<D> operator-(Jet<D> a, const Jet<D>& b) { return a -= b; }
template <std::size_t D>
constexpr Jet<D> operator+(Jet<D> a, double s) { a.c[0] += s; return a; }
template <std::size_t D>
constexpr Jet<D> operator+(double s, Jet<D> a) { a.c[0] += s; return a; }
template <std::size_t D>
constexpr Jet<D> operator-(Jet<D> a, double s) { a.c[0] -= s; return a; }
template <std::size_t D>
constexpr Jet<D> operator-(double s, const Jet<D>& a) { return (-a) + s; }
template <std::size_t D>
constexpr Jet<D> operator*(Jet<D> a, double s) { return a *= s; }
template <std::size_t D>
constexpr Jet<D> operator*(double s, Jet<D> a) { return a *= s; }

template <std::size_t D>
constexpr Jet<D> operator*(const Jet<D>& a, const Jet<D>& b) {
  Jet<D> out;
  for (std::size_t n = 0; n <= D; ++n) {
    double s = 0.0;
    for (std::size_t k = 0; k <= n; ++k) s += a.c[k] * b.c[n - k];
    out.c[n] = s;
  }
  return out;
}

template <std::size_t D>
constexpr Jet<D> operator/(const Jet<D>& a, const Jet<D>& b) {
  Jet<D> q;
  for (std::size_t n = 0; n <= D; ++n) {
    double s = a.c[n];
    for (std::size_t k = 1; k <= n; ++k) s -= b.c[k] * q.c[n - k];
    q.c[n] = s / b.c[0];
  }
  return q;
}

template <std::size_t D>
constexpr Jet<D> operator/(const Jet<D>& a, double s) { return a * (1.0 / s); }

template <std::size_t D>
constexpr Jet<D> operator/(double s, const Jet<D>& b) { return Jet<D>::constant(s) / b; }

template <std::size_t D>
Jet<D> exp(const Jet<D>& a) {
  Jet<D> e;
  e.c[0] = std::exp(a.c[0]);
  for (std::size_t n = 1; n <= D; ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += static_cast<double>(k) * a.c[k] * e.c[n - k];
    e.c[n] = s / static_cast<double>(n);
  }
  return e;
}

inline double value_of(double x) { return x; }

/// A constant of type T (double or Jet<D>).
template <typename T>
constexpr T constant_like(double v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return T::constant(v);
  }
}
template <std::size_t D>
constexpr double value_of(const Jet<D>& j) { return j.value(); }

}  // namespace eqp
