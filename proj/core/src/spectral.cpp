#include "eqp/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <sstream>

#include "eqp/error.hpp"
#include "eqp/shear_flow.hpp"

namespace eqp {

TorusGrid::TorusGrid(std::size_t n) : n_(n) {
  if (n < 16 || n % 2 != 0) {
    throw ValidationError("grid size N = " + std::to_string(n) + " must be even and at least 16");
  }
}

double TorusGrid::spacing() const { return kTwoPi / static_cast<double>(n_); }

ScalarField::ScalarField(TorusGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(TorusGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ValidationError("field has " + std::to_string(values_.size()) + " values, grid needs " +
                          std::to_string(grid_.size()));
  }
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s) * grid_.spacing();
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) { return add_scaled(1.0, o); }
ScalarField& ScalarField::operator-=(const ScalarField& o) { return add_scaled(-1.0, o); }

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::add_scaled(double s, const ScalarField& o) {
  if (!(o.grid_ == grid_)) throw ValidationError("field grids differ");
  for (std::size_t q = 0; q < values_.size(); ++q) values_[q] += s * o.values_[q];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

SpectrumField::SpectrumField(TorusGrid grid) : grid_(grid), coeffs_(grid.n() * grid.half_width()) {}

long wavenumber(std::size_t index, std::size_t n) {
  const auto i = static_cast<long>(index);
  const auto nn = static_cast<long>(n);
  return i <= nn / 2 ? i : i - nn;
}

namespace {

// The FFTW planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct SpectralOps::Impl {
  TorusGrid grid;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  std::vector<double> wave;  // signed wavenumbers per row index

  explicit Impl(TorusGrid g) : grid(g) {
    const auto n = static_cast<int>(g.n());
    real = fftw_alloc_real(g.size());
    spec = fftw_alloc_complex(g.n() * g.half_width());
    {
      std::lock_guard lock(planner_mutex());
      r2c = fftw_plan_dft_r2c_2d(n, n, real, spec, FFTW_ESTIMATE);
      c2r = fftw_plan_dft_c2r_2d(n, n, spec, real, FFTW_ESTIMATE);
    }
    wave.resize(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) wave[i] = static_cast<double>(wavenumber(i, g.n()));
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(spec);
  }
};

SpectralOps::SpectralOps(TorusGrid grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralOps::~SpectralOps() = default;
SpectralOps::SpectralOps(SpectralOps&&) noexcept = default;
SpectralOps& SpectralOps::operator=(SpectralOps&&) noexcept = default;

const TorusGrid& SpectralOps::grid() const { return impl_->grid; }

SpectrumField SpectralOps::forward(const ScalarField& f) {
  auto& im = *impl_;
  if (!(f.grid() == im.grid)) throw ValidationError("field grid does not match the spectral operator grid");
  std::copy(f.values().begin(), f.values().end(), im.real);
  fftw_execute(im.r2c);
  SpectrumField out(im.grid);
  const double scale = 1.0 / static_cast<double>(im.grid.size());
  auto coeffs = out.coeffs();
  for (std::size_t q = 0; q < coeffs.size(); ++q) coeffs[q] = {im.spec[q][0] * scale, im.spec[q][1] * scale};
  return out;
}

ScalarField SpectralOps::inverse(const SpectrumField& f) {
  auto& im = *impl_;
  auto coeffs = f.coeffs();
  for (std::size_t q = 0; q < coeffs.size(); ++q) {
    im.spec[q][0] = coeffs[q].real();
    im.spec[q][1] = coeffs[q].imag();
  }
  fftw_execute(im.c2r);
  return ScalarField(im.grid, std::vector<double>(im.real, im.real + im.grid.size()));
}

void SpectralOps::differentiate(SpectrumField& f, Axis axis) const {
  const std::size_t n = impl_->grid.n();
  const std::size_t w = impl_->grid.half_width();
  const std::size_t nyquist = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const std::size_t idx = axis == Axis::x ? i : j;
      if (idx == nyquist) {
        f(i, j) = 0.0;
        continue;
      }
      const double k = axis == Axis::x ? impl_->wave[i] : static_cast<double>(j);
      f(i, j) *= std::complex<double>(0.0, k);
    }
  }
}

void SpectralOps::apply_laplacian(SpectrumField& f) const {
  const std::size_t n = impl_->grid.n();
  const std::size_t w = impl_->grid.half_width();
  for (std::size_t i = 0; i < n; ++i) {
    const double kx = impl_->wave[i];
    for (std::size_t j = 0; j < w; ++j) {
      const double ky = static_cast<double>(j);
      f(i, j) *= -(kx * kx + ky * ky);
    }
  }
}

void SpectralOps::apply_inverse_laplacian(SpectrumField& f) const {
  const std::size_t n = impl_->grid.n();
  const std::size_t w = impl_->grid.half_width();
  for (std::size_t i = 0; i < n; ++i) {
    const double kx = impl_->wave[i];
    for (std::size_t j = 0; j < w; ++j) {
      const double ky = static_cast<double>(j);
      const double k2 = kx * kx + ky * ky;
      f(i, j) = k2 == 0.0 ? std::complex<double>{} : f(i, j) / -k2;
    }
  }
}

void SpectralOps::truncate(SpectrumField& f) const {
  const std::size_t n = impl_->grid.n();
  const std::size_t w = impl_->grid.half_width();
  const double cut = static_cast<double>(impl_->grid.dealias_cutoff());
  for (std::size_t i = 0; i < n; ++i) {
    const bool row_out = std::abs(impl_->wave[i]) > cut;
    for (std::size_t j = 0; j < w; ++j) {
      if (row_out || static_cast<double>(j) > cut) f(i, j) = 0.0;
    }
  }
}

ScalarField SpectralOps::derivative(const ScalarField& f, Axis axis) {
  auto s = forward(f);
  differentiate(s, axis);
  return inverse(s);
}

ScalarField SpectralOps::laplacian(const ScalarField& f) {
  auto s = forward(f);
  apply_laplacian(s);
  return inverse(s);
}

ScalarField SpectralOps::inverse_laplacian_zero_mean(const ScalarField& f) {
  const double mean = f.mean();
  if (std::abs(mean) > 1e-10 * f.max_abs()) {
    std::ostringstream os;
    os.precision(6);
    os << "inverse Laplacian needs a zero-mean source; measured mean " << mean << " (max |f| " << f.max_abs()
       << ")";
    throw ValidationError(os.str());
  }
  auto s = forward(f);
  apply_inverse_laplacian(s);
  return inverse(s);
}

SpectrumField SpectralOps::poisson_bracket(const SpectrumField& f, const SpectrumField& g) {
  SpectrumField ft = f;
  SpectrumField gt = g;
  truncate(ft);
  truncate(gt);
  auto d = [&](const SpectrumField& s, Axis axis) {
    SpectrumField c = s;
    differentiate(c, axis);
    return inverse(c);
  };
  const ScalarField fx = d(ft, Axis::x);
  const ScalarField fy = d(ft, Axis::y);
  const ScalarField gx = d(gt, Axis::x);
  const ScalarField gy = d(gt, Axis::y);
  ScalarField product(impl_->grid);
  auto p = product.values();
  auto a = fx.values();
  auto b = fy.values();
  auto c = gx.values();
  auto e = gy.values();
  for (std::size_t q = 0; q < p.size(); ++q) p[q] = a[q] * e[q] - b[q] * c[q];
  auto out = forward(product);
  truncate(out);
  return out;
}

ScalarField SpectralOps::poisson_bracket(const ScalarField& f, const ScalarField& g) {
  return inverse(poisson_bracket(forward(f), forward(g)));
}

std::pair<ScalarField, ScalarField> SpectralOps::velocity_from_stream(const ScalarField& psi) {
  const auto s = forward(psi);
  SpectrumField sx = s;
  SpectrumField sy = s;
  differentiate(sx, Axis::x);
  differentiate(sy, Axis::y);
  ScalarField ux = inverse(sy);
  ux *= -1.0;
  return {std::move(ux), inverse(sx)};
}

ScalarField SpectralOps::dealias(const ScalarField& f) {
  auto s = forward(f);
  truncate(s);
  return inverse(s);
}

}  // namespace eqp
