#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace eqp {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Flat strip [a, b] of the shear background, in x.
struct StripSpec {
  double a = 0.0;
  double b = 0.0;

  double midpoint() const { return 0.5 * (a + b); }
  double width() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
};

/// Which member of the background triple to evaluate.
enum class BackgroundOrder { stream = 0, velocity = 1, vorticity = 2 };

struct ShearFlowOptions {
  /// Cells of the cumulative-quadrature table over [0, 2pi).
  std::size_t quadrature_cells = 4096;
};

/// One-dimensional periodic background V(x) whose second derivative vanishes
/// identically on a set of disjoint strips.
///
/// V'' is a sum of compactly supported bumps, one per gap between
/// consecutive strips (cyclically). Each bump is a Gaussian core of width
/// gap/14 multiplied by a C-infinity cutoff, so V'' is exactly zero outside
/// the open gaps. V' and V are the zero-mean antiderivatives.
///
/// Immutable after build; evaluation is safe from multiple threads.
class ShearFlow {
 public:
  struct Gap {
    double left = 0.0;   // b_g
    double right = 0.0;  // a_{g+1}, unwrapped past 2pi for the last gap
    double amplitude = 0.0;
  };

  /// Validates the strip layout and builds the background.
  ///
  /// Strips must be sorted and pairwise disjoint as closed intervals inside
  /// [0, 2pi], with a positive cyclic gap after every strip. One amplitude
  /// per gap; the last gap's amplitude is shifted so that V'' integrates to
  /// zero. Throws ValidationError on any violation.
  static ShearFlow build(std::vector<StripSpec> strips, std::vector<double> gap_amplitudes,
                         ShearFlowOptions options = {});

  /// V(x), V'(x) or V''(x) for any real x (reduced mod 2pi). V'' is exactly
  /// zero inside every strip.
  double eval(double x, BackgroundOrder order) const;

  double stream(double x) const { return eval(x, BackgroundOrder::stream); }
  double velocity(double x) const { return eval(x, BackgroundOrder::velocity); }
  double vorticity(double x) const { return eval(x, BackgroundOrder::vorticity); }

  /// v_k = V'(x) on strip k, evaluated at the strip midpoint.
  double strip_velocity(std::size_t k) const;

  std::size_t strip_count() const { return strips_.size(); }
  const std::vector<StripSpec>& strips() const { return strips_; }
  const std::vector<Gap>& gaps() const { return gaps_; }
  const std::vector<double>& velocities() const { return velocities_; }
  const std::vector<double>& requested_amplitudes() const { return requested_amplitudes_; }
  std::vector<double> effective_amplitudes() const;

  /// Non-fatal findings from construction (degenerate velocities).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  ShearFlow() = default;

  double second_derivative(double x) const;

  std::vector<StripSpec> strips_;
  std::vector<Gap> gaps_;
  std::vector<double> requested_amplitudes_;
  std::vector<double> velocities_;
  std::vector<std::string> warnings_;

  double cell_width_ = 0.0;
  std::vector<double> stream_nodes_;    // V at x_i = i * cell_width
  std::vector<double> velocity_nodes_;  // V' at x_i
};

ShearFlow build_shear_flow(std::vector<StripSpec> strips, std::vector<double> gap_amplitudes);

double eval_background(const ShearFlow& flow, double x, BackgroundOrder order);

/// Throws std::out_of_range for an invalid strip index.
double strip_velocity(const ShearFlow& flow, std::size_t k);

/// Unnormalized gap bump profile on (left, right); zero outside.
double gap_bump(double x, double left, double right);

/// Reduces an angle to [0, 2pi).
double wrap_angle(double x);

}  // namespace eqp
