#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqp/analytic_solution.hpp"
#include "eqp/euler_solver.hpp"
#include "eqp/radial_profile.hpp"
#include "eqp/spectral.hpp"

namespace eqp {

inline constexpr double kSpectralToleranceFloor = 1e-10;
inline constexpr double kConstructionTolerance = 1e-6;
inline constexpr double kZeroMeanTolerance = 1e-10;
inline constexpr double kSymplecticTolerance = 1e-13;
inline constexpr double kEvolutionTolerance = 1e-6;
inline constexpr double kMeanConservationTolerance = 1e-11;
inline constexpr double kInvariantDriftTolerance = 1e-9;
/// Negative controls must exceed their tolerance by this factor.
inline constexpr double kNegativeControlMargin = 1e3;

/// max(1e-10, 10 x the Laplacian-consistency residual at the same N).
/// Profiles are C-infinity but not analytic, so a fixed constant would be
/// wrong across grid sizes.
double spectral_tolerance(double laplacian_residual);

/// max(|f_x|, |f_y|) over the grid, spectral derivatives.
double gradient_max(const ScalarField& f, SpectralOps& ops);

/// L-inf of the dealiased bracket {f, g} divided by the bracket scale
/// gradient_max(f) * gradient_max(g). Zero when either operand is flat.
double bracket_residual(const ScalarField& f, const ScalarField& g, SpectralOps& ops);

ScalarField sample_profile(const RadialProfile& profile, ProfileField which, const TorusGrid& grid,
                           double shift = 0.0);

/// Relative residual of {Psi_k, Omega_k} = 0 for the gridded pair.
double stationarity_residual(const RadialProfile& profile, SpectralOps& ops);

/// Relative L2 distance between the spectral Laplacian of the gridded Psi_k
/// and the gridded Omega_k (radial formula); zero for a zero profile.
double laplacian_consistency(const RadialProfile& profile, SpectralOps& ops);

/// The profile's stream function sampled with an elliptic distance
/// ((dx / aspect)^2 + dy^2) / 2 and its spectral Laplacian. Not a stationary
/// state; used as a negative control.
struct FieldPair {
  ScalarField stream;
  ScalarField vorticity;
};
FieldPair make_non_radial_control(const RadialProfile& profile, SpectralOps& ops, double aspect = 1.25);

struct ActionAngle {
  double r = 0.0;
  double theta = 0.0;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Jacobian of (x, y) -> (r, theta) for x = sqrt(2r) cos(theta),
/// y = sqrt(2r) sin(theta). Throws ValidationError for r <= 0.
Matrix2 action_angle_jacobian(double r, double theta);

/// max over samples of max|M^T J M - J|.
double symplectic_jacobian_check(std::span<const ActionAngle> samples);

/// Relative residual of {Psi_j, Omega_k} for j != k. Throws
/// std::invalid_argument when j == k.
double cross_term_residual(const QuasiPeriodicSolution& solution, std::size_t j, std::size_t k, SpectralOps& ops);
double cross_term_residual(const RadialProfile& stream_profile, const RadialProfile& vorticity_profile,
                           SpectralOps& ops);

/// Relative residual of d_t omega + {psi, omega} at time t, with the exact
/// d_t omega = -sum_k v_k d_y chi_k projected on the dealiased band. Scale
/// is gradient_max(psi) * gradient_max(omega).
double pde_residual(const QuasiPeriodicSolution& solution, double t, SpectralOps& ops);

struct EvolutionError {
  double t = 0.0;
  double l2 = 0.0;    // relative L2
  double linf = 0.0;  // relative L-inf
};

EvolutionError evolution_error(const QuasiPeriodicSolution& solution, const ScalarField& omega, double t,
                               unsigned workers = 1);
std::vector<EvolutionError> evolution_error(const QuasiPeriodicSolution& solution,
                                            std::span<const SolverState> states, unsigned workers = 1);

/// Time for traveling term k to move `cells` whole grid cells.
double quasi_period_time(const QuasiPeriodicSolution& solution, std::size_t k, std::size_t n, std::size_t cells);

/// Restricted to the grid rows x_i in (a_k, b_k): max|omega_t(x, y) -
/// omega_0(x, y - v t)| / max|chi_k|. v t must be a whole number of cells
/// (ValidationError otherwise). `velocity` defaults to v_k.
double quasi_period_check(const QuasiPeriodicSolution& solution, std::size_t k, const ScalarField& omega_initial,
                          const ScalarField& omega_at, double t, std::optional<double> velocity = std::nullopt);

struct CheckRecord {
  std::string name;
  std::size_t n = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  /// Passing means residual >= kNegativeControlMargin * tolerance.
  bool negative_control = false;
};

struct VerificationReport {
  std::vector<CheckRecord> records;
  bool all_passed() const;
  void add(std::string name, std::size_t n, double residual, double tolerance, bool negative_control = false);
};

struct SuiteOptions {
  std::size_t n = 256;
  double dt = 1e-3;
  double t_end = 1.0;
  unsigned workers = 1;
  bool include_dynamics = true;
};

/// Every identity of the construction as a numerical check, plus negative
/// controls that the checks must reject. Support failures are reported and
/// end the suite early, since no solution can be assembled.
VerificationReport run_verification_suite(const ShearFlow& flow, const std::vector<RadialProfile>& profiles,
                                          const SuiteOptions& options);

}  // namespace eqp
