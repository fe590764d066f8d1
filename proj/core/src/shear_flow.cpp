#include "eqp/shear_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "eqp/error.hpp"
#include "eqp/smooth_step.hpp"
#include "quadrature.hpp"

namespace eqp {

namespace {

// Gaussian core width as a fraction of the gap, and where the cutoff starts
// (fraction of the half-gap).
constexpr double kGapWidthToSigma = 14.0;
constexpr double kGapCutoffStart = 0.8;

std::string describe(const StripSpec& s) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << s.a << ", " << s.b << "]";
  return os.str();
}

void validate_strips(const std::vector<StripSpec>& strips) {
  if (strips.empty()) throw ValidationError("shear flow needs at least one strip");
  for (std::size_t k = 0; k < strips.size(); ++k) {
    const auto& s = strips[k];
    if (!std::isfinite(s.a) || !std::isfinite(s.b) || s.a < 0.0 || s.b > kTwoPi || !(s.a < s.b)) {
      throw ValidationError("strip " + std::to_string(k) + " " + describe(s) +
                            " must satisfy 0 <= a < b <= 2pi");
    }
  }
  for (std::size_t k = 0; k + 1 < strips.size(); ++k) {
    if (strips[k].a >= strips[k + 1].a) {
      throw ValidationError("strips " + std::to_string(k) + " and " + std::to_string(k + 1) +
                            " are not sorted: " + describe(strips[k]) + ", " + describe(strips[k + 1]));
    }
    if (strips[k].b >= strips[k + 1].a) {
      throw ValidationError("strips " + std::to_string(k) + " " + describe(strips[k]) + " and " +
                            std::to_string(k + 1) + " " + describe(strips[k + 1]) + " overlap");
    }
  }
  if (strips.back().b >= strips.front().a + kTwoPi) {
    throw ValidationError("strips " + std::to_string(strips.size() - 1) + " and 0 touch across the periodic boundary");
  }
}

}  // namespace

double wrap_angle(double x) {
  double w = std::fmod(x, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double gap_bump(double x, double left, double right) {
  if (!(x > left && x < right)) return 0.0;
  const double half = 0.5 * (right - left);
  const double mid = left + half;
  const double sigma = (right - left) / kGapWidthToSigma;
  const double z = (x - mid) / sigma;
  const double u = (std::abs(x - mid) / half - kGapCutoffStart) / (1.0 - kGapCutoffStart);
  return std::exp(-0.5 * z * z) * smooth_step_down(u);
}

ShearFlow ShearFlow::build(std::vector<StripSpec> strips, std::vector<double> gap_amplitudes,
                           ShearFlowOptions options) {
  validate_strips(strips);
  if (gap_amplitudes.size() != strips.size()) {
    throw ValidationError("expected " + std::to_string(strips.size()) + " gap amplitudes (one per gap), got " +
                          std::to_string(gap_amplitudes.size()));
  }
  for (std::size_t g = 0; g < gap_amplitudes.size(); ++g) {
    if (!std::isfinite(gap_amplitudes[g])) {
      throw ValidationError("gap amplitude " + std::to_string(g) + " is not finite");
    }
  }
  if (options.quadrature_cells < 64) throw ValidationError("quadrature_cells must be at least 64");

  ShearFlow flow;
  flow.strips_ = std::move(strips);
  flow.requested_amplitudes_ = gap_amplitudes;

  const std::size_t count = flow.strips_.size();
  flow.gaps_.resize(count);
  for (std::size_t g = 0; g < count; ++g) {
    const double left = flow.strips_[g].b;
    const double right = g + 1 < count ? flow.strips_[g + 1].a : flow.strips_.front().a + kTwoPi;
    flow.gaps_[g] = {left, right, gap_amplitudes[g]};
  }

  // Shift the last amplitude so that V'' has zero integral.
  auto bump_integral = [](const Gap& gap) {
    constexpr int pieces = 512;
    const double h = (gap.right - gap.left) / pieces;
    double sum = 0.0;
    for (int p = 0; p < pieces; ++p) {
      const double lo = gap.left + p * h;
      sum += detail::gauss_legendre(lo, lo + h, [&](double s) { return gap_bump(s, gap.left, gap.right); });
    }
    return sum;
  };
  double weighted = 0.0;
  for (std::size_t g = 0; g + 1 < count; ++g) weighted += flow.gaps_[g].amplitude * bump_integral(flow.gaps_[g]);
  auto& last = flow.gaps_.back();
  last.amplitude = count == 1 ? 0.0 : -weighted / bump_integral(last);

  // Cumulative tables of V' and V at uniform nodes, then mean shifts.
  const std::size_t cells = options.quadrature_cells;
  const double h = kTwoPi / static_cast<double>(cells);
  flow.cell_width_ = h;
  std::vector<double> vel(cells + 1, 0.0);
  std::vector<double> str(cells + 1, 0.0);
  double stream_integral = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = static_cast<double>(i) * h;
    const double hi = lo + h;
    const double d2_int = detail::gauss_legendre(lo, hi, [&](double s) { return flow.second_derivative(s); });
    const double d2_lin = detail::gauss_legendre(lo, hi, [&](double s) { return (hi - s) * flow.second_derivative(s); });
    const double d2_quad = detail::gauss_legendre(
        lo, hi, [&](double s) { return 0.5 * (hi - s) * (hi - s) * flow.second_derivative(s); });
    stream_integral += h * str[i] + 0.5 * h * h * vel[i] + d2_quad;
    vel[i + 1] = vel[i] + d2_int;
    str[i + 1] = str[i] + h * vel[i] + d2_lin;
  }
  const double slope = -str[cells] / kTwoPi;
  const double offset = -(stream_integral + slope * 0.5 * kTwoPi * kTwoPi) / kTwoPi;
  for (std::size_t i = 0; i <= cells; ++i) {
    vel[i] += slope;
    str[i] += slope * static_cast<double>(i) * h + offset;
  }
  flow.velocity_nodes_ = std::move(vel);
  flow.stream_nodes_ = std::move(str);

  flow.velocities_.resize(count);
  for (std::size_t k = 0; k < count; ++k) flow.velocities_[k] = flow.velocity(flow.strips_[k].midpoint());

  if (count >= 2) {
    const bool all_zero =
        std::all_of(gap_amplitudes.begin(), gap_amplitudes.end(), [](double b) { return b == 0.0; });
    if (all_zero) {
      flow.warnings_.push_back("all gap amplitudes are zero: every strip velocity is 0 (degenerate frequencies)");
    } else {
      double scale = 0.0;
      for (double v : flow.velocities_) scale = std::max(scale, std::abs(v));
      for (std::size_t j = 0; j < count; ++j) {
        for (std::size_t k = j + 1; k < count; ++k) {
          if (std::abs(flow.velocities_[j] - flow.velocities_[k]) <= 1e-12 * std::max(scale, 1.0)) {
            flow.warnings_.push_back("strips " + std::to_string(j) + " and " + std::to_string(k) +
                                     " have equal velocities (degenerate frequencies)");
          }
        }
      }
    }
  }
  return flow;
}

double ShearFlow::second_derivative(double x) const {
  const double w = wrap_angle(x);
  double sum = 0.0;
  for (const auto& gap : gaps_) {
    if (gap.amplitude == 0.0) continue;
    const double xx = w < gap.left ? w + kTwoPi : w;
    sum += gap.amplitude * gap_bump(xx, gap.left, gap.right);
  }
  return sum;
}

double ShearFlow::eval(double x, BackgroundOrder order) const {
  const double w = wrap_angle(x);
  if (order == BackgroundOrder::vorticity) return second_derivative(w);

  const std::size_t cells = velocity_nodes_.size() - 1;
  const auto i = std::min(static_cast<std::size_t>(w / cell_width_), cells - 1);
  const double xi = static_cast<double>(i) * cell_width_;
  if (order == BackgroundOrder::velocity) {
    if (w == xi) return velocity_nodes_[i];
    return velocity_nodes_[i] + detail::gauss_legendre(xi, w, [&](double s) { return second_derivative(s); });
  }
  double value = stream_nodes_[i] + (w - xi) * velocity_nodes_[i];
  if (w != xi) value += detail::gauss_legendre(xi, w, [&](double s) { return (w - s) * second_derivative(s); });
  return value;
}

double ShearFlow::strip_velocity(std::size_t k) const {
  if (k >= velocities_.size()) {
    throw std::out_of_range("strip index " + std::to_string(k) + " out of range (K = " +
                            std::to_string(velocities_.size()) + ")");
  }
  return velocities_[k];
}

std::vector<double> ShearFlow::effective_amplitudes() const {
  std::vector<double> out;
  out.reserve(gaps_.size());
  for (const auto& g : gaps_) out.push_back(g.amplitude);
  return out;
}

ShearFlow build_shear_flow(std::vector<StripSpec> strips, std::vector<double> gap_amplitudes) {
  return ShearFlow::build(std::move(strips), std::move(gap_amplitudes));
}

double eval_background(const ShearFlow& flow, double x, BackgroundOrder order) { return flow.eval(x, order); }

double strip_velocity(const ShearFlow& flow, std::size_t k) { return flow.strip_velocity(k); }

}  // namespace eqp
