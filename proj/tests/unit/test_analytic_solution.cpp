#include <doctest.h>

#include <cmath>

#include "eqp/analytic_solution.hpp"
#include "eqp/error.hpp"
#include "fixtures.hpp"

using namespace eqp;
using fixture::pi;

namespace {

double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("pure shear state is stationary") {
  const auto sol = assemble(fixture::default_flow(), {});
  const TorusGrid g(64);
  CHECK(sol.mode_count() == 0);
  CHECK(max_diff(sol.vorticity(0.0, g), sol.vorticity(0.73, g)) == 0.0);
  const auto v2 = ScalarField::sample(g, [&](double x, double) { return sol.flow().vorticity(x); });
  CHECK(max_diff(sol.vorticity(3.0, g), v2) == 0.0);
  const auto v0 = ScalarField::sample(g, [&](double x, double) { return sol.flow().stream(x); });
  CHECK(max_diff(sol.stream(1.0, g), v0) == 0.0);
}

TEST_CASE("single valid profile assembles with one frequency") {
  const auto flow = ShearFlow::build({{1.0, 3.0}}, {0.0});
  const auto sol = assemble(flow, {make_default_profile({2.0, 1.0}, 0.2, 1.0)});
  const auto f = sol.frequencies();
  REQUIRE(f.velocities.size() == 1);
  CHECK(f.velocities[0] == flow.strip_velocity(0));
}

TEST_CASE("profile wider than its strip is rejected") {
  const auto flow = ShearFlow::build({{1.0, 2.0}}, {0.0});
  CHECK_THROWS_AS(assemble(flow, {make_default_profile({1.5, 1.0}, 0.2, 1.0)}), ValidationError);
  CHECK_THROWS_AS(assemble(flow, {make_default_profile({2.5, 1.0}, 0.01, 1.0)}), ValidationError);
}

TEST_CASE("profile count must match the strips") {
  CHECK_THROWS_AS(assemble(fixture::default_flow(), {fixture::default_profiles()[0]}), ValidationError);
}

TEST_CASE("t = 0 is V'' plus unshifted profiles") {
  const auto sol = fixture::default_solution();
  const TorusGrid g(64);
  const auto ref = ScalarField::sample(g, [&](double x, double y) {
    double s = sol.flow().vorticity(x);
    for (const auto& p : sol.profiles()) s += p.eval(ProfileField::vorticity, x, y);
    return s;
  });
  CHECK(max_diff(sol.vorticity(0.0, g), ref) <= 1e-12 * ref.max_abs());
}

TEST_CASE("one full y period of travel returns to the initial field") {
  const auto flow = ShearFlow::build({{0.5, 2.5}, {3.5, 5.5}}, {5.0, -5.0});
  const auto sol =
      assemble(flow, {make_default_profile({1.5, 1.0}, 0.3, 1.0), make_default_profile({4.5, 2.0}, 0.3, 1.0)});
  const TorusGrid g(64);
  const double period = 2 * pi / std::abs(sol.velocities()[0]);
  const auto a = sol.traveling_vorticity(0, 0.0, g);
  const auto b = sol.traveling_vorticity(0, period, g);
  CHECK(max_diff(a, b) <= 1e-10 * a.max_abs());
}

TEST_CASE("zero-amplitude profiles give the pure background at all times") {
  const auto sol = assemble(fixture::default_flow(), fixture::default_profiles(0.0));
  const TorusGrid g(64);
  const auto ref = ScalarField::sample(g, [&](double x, double) { return sol.flow().vorticity(x); });
  CHECK(max_diff(sol.vorticity(0.0, g), ref) == 0.0);
  CHECK(max_diff(sol.vorticity(0.9, g), ref) == 0.0);
}

TEST_CASE("spectral Laplacian of the stream function is the vorticity") {
  const auto sol = fixture::default_solution();
  const TorusGrid g(256);
  SpectralOps ops(g);
  for (double t : {0.0, 0.37}) {
    const auto w = sol.vorticity(t, g);
    CHECK((ops.laplacian(sol.stream(t, g)) - w).l2_norm() <= 1e-6 * w.l2_norm());
  }
}

TEST_CASE("stream function inside a strip is the translated initial stream function") {
  const auto sol = fixture::default_solution();
  const TorusGrid g(64);
  const double t = 0.21;
  const auto psi_t = sol.stream(t, g);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& strip = sol.flow().strips()[k];
    const double v = sol.velocities()[k];
    for (std::size_t i = 0; i < g.n(); ++i) {
      const double x = g.node(i);
      if (!(x > strip.a && x < strip.b)) continue;
      for (std::size_t j = 0; j < g.n(); j += 3) {
        const double y = g.node(j);
        double shifted = sol.flow().stream(x);
        for (const auto& p : sol.profiles()) shifted += p.eval(ProfileField::stream, x, y - v * t);
        CHECK(psi_t(i, j) == doctest::Approx(shifted).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("grid mean of the vorticity vanishes at all times") {
  const auto sol = fixture::default_solution();
  const TorusGrid g(256);
  for (double t : {0.0, 0.5, 1.0}) {
    CHECK(std::abs(sol.vorticity(t, g).mean()) <= 1e-10 * 0.4);
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(sol.traveling_vorticity(k, t, g).mean()) <= 1e-10 * 0.4);
  }
}

TEST_CASE("frequencies") {
  const auto zero = assemble(fixture::zero_flow(), {});
  CHECK(zero.frequencies().velocities.empty());
  const auto z1 = assemble(fixture::zero_flow(), {make_default_profile({3.0, 1.0}, 0.3, 1.0)});
  const auto f0 = z1.frequencies();
  CHECK(f0.velocities == std::vector<double>{0.0});
  CHECK(std::isinf(f0.periods[0]));

  const auto sol = fixture::default_solution();
  const auto f = sol.frequencies();
  REQUIRE(f.velocities.size() == 2);
  CHECK(f.velocities[0] == doctest::Approx(-f.velocities[1]).epsilon(1e-12));
  CHECK(f.periods[0] == doctest::Approx(2 * pi / std::abs(f.velocities[0])));
  REQUIRE(f.commensurate_pairs.size() == 1);
  CHECK(f.commensurate_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("commensurability") {
  CHECK(commensurate(1.0, 2.0));
  CHECK(commensurate(-3.0, 2.0));
  CHECK(commensurate(0.0, 0.0));
  CHECK_FALSE(commensurate(0.0, 1.0));
  CHECK_FALSE(commensurate(1.0, std::sqrt(2.0)));
  CHECK_FALSE(commensurate(1.0, 17.0));
}

TEST_CASE("with_velocities replaces only the travel speeds") {
  const auto sol = fixture::default_solution();
  const auto moved = sol.with_velocities({0.0, 0.0});
  const TorusGrid g(64);
  CHECK(max_diff(moved.vorticity(0.8, g), sol.vorticity(0.0, g)) == 0.0);
  CHECK_THROWS(sol.with_velocities({1.0}));
  CHECK(sol.shift(0, 0.0) == 0.0);
  const double s = sol.shift(1, 10.0);
  CHECK(s >= 0.0);
  CHECK(s < 2 * pi);
}

TEST_CASE("parallel assembly is bitwise identical to serial") {
  const auto sol = fixture::default_solution();
  const TorusGrid g(128);
  const auto a = sol.vorticity(0.3, g, 1);
  const auto b = sol.vorticity(0.3, g, 4);
  CHECK(max_diff(a, b) == 0.0);
}
