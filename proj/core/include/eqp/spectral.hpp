#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace eqp {

/// Uniform N x N grid on the torus [0, 2pi)^2, nodes x_i = 2pi i / N.
class TorusGrid {
 public:
  /// Throws ValidationError unless n is even and n >= 16.
  explicit TorusGrid(std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  double spacing() const;
  double node(std::size_t i) const { return spacing() * static_cast<double>(i); }
  /// Largest retained |k| per axis under the 2/3 rule.
  std::size_t dealias_cutoff() const { return n_ / 3; }
  /// Columns of the half spectrum (k_y = 0 .. N/2).
  std::size_t half_width() const { return n_ / 2 + 1; }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  std::size_t n_;
};

/// Real samples on a TorusGrid, row-major over the x index i, then y index j.
class ScalarField {
 public:
  explicit ScalarField(TorusGrid grid);
  ScalarField(TorusGrid grid, std::vector<double> values);

  template <typename F>
  static ScalarField sample(TorusGrid grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.n(); ++i) {
      const double x = grid.node(i);
      for (std::size_t j = 0; j < grid.n(); ++j) out(i, j) = f(x, grid.node(j));
    }
    return out;
  }

  const TorusGrid& grid() const { return grid_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * grid_.n() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * grid_.n() + j]; }

  double mean() const;
  double max_abs() const;
  /// sqrt(sum v^2 * h^2), the grid approximation of the L2 norm.
  double l2_norm() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// this += s * o
  ScalarField& add_scaled(double s, const ScalarField& o);

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Fourier coefficients of a real field in half storage: index (i, j) holds
/// c(k_x, k_y) with k_x = i (i <= N/2) or i - N, and k_y = j in [0, N/2].
/// Hermitian symmetry supplies the other half.
class SpectrumField {
 public:
  explicit SpectrumField(TorusGrid grid);

  const TorusGrid& grid() const { return grid_; }
  std::complex<double>& operator()(std::size_t i, std::size_t j) { return coeffs_[i * grid_.half_width() + j]; }
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
    return coeffs_[i * grid_.half_width() + j];
  }
  std::span<std::complex<double>> coeffs() { return coeffs_; }
  std::span<const std::complex<double>> coeffs() const { return coeffs_; }

  /// c(0, 0), i.e. the field mean.
  double mean_mode() const { return coeffs_[0].real(); }

 private:
  TorusGrid grid_;
  std::vector<std::complex<double>> coeffs_;
};

enum class Axis { x, y };

/// Signed wavenumber for half-storage row i (or column j).
long wavenumber(std::size_t index, std::size_t n);

/// Pseudo-spectral operators on one grid. Holds FFT plans and scratch
/// buffers, so one instance must not be used from two threads at once.
class SpectralOps {
 public:
  explicit SpectralOps(TorusGrid grid);
  ~SpectralOps();
  SpectralOps(SpectralOps&&) noexcept;
  SpectralOps& operator=(SpectralOps&&) noexcept;
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const TorusGrid& grid() const;

  /// Normalized so that coefficients are true Fourier coefficients.
  SpectrumField forward(const ScalarField& f);
  ScalarField inverse(const SpectrumField& f);

  /// Spectral derivative i k c; the Nyquist mode of the result is zero.
  ScalarField derivative(const ScalarField& f, Axis axis);
  ScalarField laplacian(const ScalarField& f);

  /// psi with Delta psi = f and zero mean. Throws ValidationError when
  /// |mean(f)| > 1e-10 * max|f|.
  ScalarField inverse_laplacian_zero_mean(const ScalarField& f);

  /// {f, g} = f_x g_y - f_y g_x with 2/3-rule truncation of the inputs and
  /// of the output.
  ScalarField poisson_bracket(const ScalarField& f, const ScalarField& g);

  /// u = J grad psi = (-psi_y, psi_x).
  std::pair<ScalarField, ScalarField> velocity_from_stream(const ScalarField& psi);

  /// Projection onto |k_x|, |k_y| <= N/3.
  ScalarField dealias(const ScalarField& f);

  // Spectral-space building blocks.
  void differentiate(SpectrumField& f, Axis axis) const;
  void apply_laplacian(SpectrumField& f) const;
  void apply_inverse_laplacian(SpectrumField& f) const;
  void truncate(SpectrumField& f) const;
  /// Dealiased bracket of two spectra; the result is truncated.
  SpectrumField poisson_bracket(const SpectrumField& f, const SpectrumField& g);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace eqp
