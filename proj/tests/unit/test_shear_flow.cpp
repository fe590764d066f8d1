#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eqp/error.hpp"
#include "eqp/shear_flow.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace eqp;
using fixture::pi;

namespace {

double integral(const ShearFlow& flow, BackgroundOrder order) {
  return oracle::periodic_trapezoid([&](double x) { return flow.eval(x, order); }, 1 << 15);
}

}  // namespace

TEST_CASE("narrow two-strip flow integrates to zero and is flat on the strips") {
  const auto flow = fixture::narrow_flow();
  CHECK(std::abs(integral(flow, BackgroundOrder::vorticity)) <= 1e-12);
  for (const auto& s : flow.strips()) {
    for (int i = 0; i <= 100; ++i) {
      const double x = s.a + s.width() * i / 100.0;
      CHECK(flow.vorticity(x) == 0.0);
    }
  }
}

TEST_CASE("zero amplitude over a wide strip is the zero flow") {
  const auto flow = fixture::zero_flow();
  for (int i = 0; i < 64; ++i) {
    const double x = 2 * pi * i / 64.0;
    CHECK(flow.stream(x) == 0.0);
    CHECK(flow.velocity(x) == 0.0);
    CHECK(flow.vorticity(x) == 0.0);
  }
  CHECK(flow.strip_velocity(0) == 0.0);
  CHECK(eval_background(flow, 1.0, BackgroundOrder::vorticity) == 0.0);
}

TEST_CASE("overlapping strips are rejected") {
  CHECK_THROWS_WITH_AS(ShearFlow::build({{1, 2}, {1.5, 3}}, {1, -1}), doctest::Contains("overlap"),
                       ValidationError);
}

TEST_CASE("layout preconditions") {
  CHECK_THROWS_AS(ShearFlow::build({}, {}), ValidationError);
  CHECK_THROWS_AS(ShearFlow::build({{3, 4}, {1, 2}}, {1, -1}), ValidationError);
  CHECK_THROWS_AS(ShearFlow::build({{2, 1}}, {0}), ValidationError);
  CHECK_THROWS_AS(ShearFlow::build({{1, 2}, {3, 4}}, {1}), ValidationError);
  CHECK_THROWS_AS(ShearFlow::build({{1, 2}, {3, 4}}, {1, NAN}), ValidationError);
  CHECK_THROWS_AS(ShearFlow::build({{1, 2}, {2, 3}}, {1, -1}), ValidationError);
  CHECK_THROWS_AS(ShearFlow::build({{0, 2}, {3, 2 * pi}}, {1, -1}), ValidationError);
  CHECK_THROWS_AS(ShearFlow::build({{-0.5, 2}}, {0}), ValidationError);
}

TEST_CASE("vorticity is exactly zero at a strip midpoint") {
  const auto flow = fixture::narrow_flow();
  CHECK(eval_background(flow, pi / 2, BackgroundOrder::vorticity) == 0.0);
}

TEST_CASE("velocity at a strip midpoint equals velocity at its edge") {
  const auto flow = fixture::narrow_flow();
  const auto& s = flow.strips()[0];
  const double mid = eval_background(flow, s.midpoint(), BackgroundOrder::velocity);
  const double edge = eval_background(flow, s.a, BackgroundOrder::velocity);
  CHECK(std::abs(mid - edge) <= 1e-12 * std::max(1.0, std::abs(mid)));
}

TEST_CASE("antisymmetric amplitudes give opposite strip velocities") {
  const auto flow = fixture::narrow_flow();
  const double v0 = strip_velocity(flow, 0);
  const double v1 = strip_velocity(flow, 1);
  CHECK(std::abs(v0) > 1e-3);
  CHECK(std::abs(v0 + v1) <= 1e-12 * std::abs(v0));
}

TEST_CASE("strip index out of range") {
  const auto flow = fixture::narrow_flow();
  CHECK_THROWS_AS(strip_velocity(flow, 5), std::out_of_range);
}

TEST_CASE("velocity agrees with the background anywhere in the strip") {
  for (const auto& flow : {fixture::narrow_flow(), fixture::default_flow()}) {
    for (std::size_t k = 0; k < flow.strip_count(); ++k) {
      const auto& s = flow.strips()[k];
      double lo = 1e300;
      double hi = -1e300;
      for (int i = 0; i < 100; ++i) {
        const double v = flow.velocity(s.a + s.width() * (i + 0.5) / 100.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      CHECK(hi - lo <= 1e-12 * std::max(1.0, std::abs(hi)));
      CHECK(std::abs(flow.strip_velocity(k) - hi) <= 1e-12 * std::max(1.0, std::abs(hi)));
    }
  }
}

TEST_CASE("zero averages of V, V' and V''") {
  for (const auto& flow : {fixture::narrow_flow(), fixture::default_flow()}) {
    const double scale = std::max(1.0, std::abs(flow.velocities()[0]));
    CHECK(std::abs(integral(flow, BackgroundOrder::vorticity)) <= 1e-12 * scale);
    CHECK(std::abs(integral(flow, BackgroundOrder::velocity)) <= 1e-12 * scale);
    CHECK(std::abs(integral(flow, BackgroundOrder::stream)) <= 1e-12 * scale);
  }
}

TEST_CASE("periodic across 0") {
  const auto flow = fixture::default_flow();
  for (auto order : {BackgroundOrder::stream, BackgroundOrder::velocity, BackgroundOrder::vorticity}) {
    CHECK(std::abs(flow.eval(0.0, order) - flow.eval(-1e-14, order)) <= 1e-12);
    CHECK(std::abs(flow.eval(1.3, order) - flow.eval(1.3 + 2 * pi, order)) <= 1e-12);
  }
}

TEST_CASE("V' and V'' are derivatives of V and V' (finite-difference oracle)") {
  const auto flow = fixture::default_flow();
  const auto V = [&](double x) { return flow.stream(x); };
  const auto dV = [&](double x) { return flow.velocity(x); };
  const double h = 1e-3;
  double worst1 = 0.0;
  double worst2 = 0.0;
  for (int i = 0; i < 97; ++i) {
    const double x = 2 * pi * (i + 0.3) / 97.0;
    worst1 = std::max(worst1, std::abs(oracle::d1(V, x, h) - flow.velocity(x)));
    worst2 = std::max(worst2, std::abs(oracle::d1(dV, x, h) - flow.vorticity(x)));
  }
  CHECK(worst1 <= 1e-7 * std::abs(flow.velocities()[0]));
  double peak = 0.0;
  for (int i = 0; i < 4096; ++i) peak = std::max(peak, std::abs(flow.vorticity(2 * pi * i / 4096.0)));
  CHECK(worst2 <= 1e-6 * peak);
}

TEST_CASE("last gap amplitude absorbs the mean") {
  const auto flow = ShearFlow::build({{0.5, 1.5}, {3.0, 3.5}}, {2.0, 2.0});
  const auto eff = flow.effective_amplitudes();
  REQUIRE(eff.size() == 2);
  CHECK(eff[0] == 2.0);
  CHECK(eff[1] < 0.0);
  CHECK(std::abs(integral(flow, BackgroundOrder::vorticity)) <= 1e-12);
  CHECK(flow.requested_amplitudes() == std::vector<double>{2.0, 2.0});
}

TEST_CASE("all-zero amplitudes warn instead of failing") {
  const auto flow = ShearFlow::build({{0.5, 1.5}, {3.0, 4.0}}, {0.0, 0.0});
  CHECK_FALSE(flow.warnings().empty());
  CHECK(flow.strip_velocity(0) == flow.strip_velocity(1));
}

TEST_CASE("gap bump is compactly supported and positive inside") {
  CHECK(gap_bump(0.9, 1.0, 2.0) == 0.0);
  CHECK(gap_bump(2.1, 1.0, 2.0) == 0.0);
  CHECK(gap_bump(1.5, 1.0, 2.0) > 0.0);
  CHECK(wrap_angle(-0.5) == doctest::Approx(2 * pi - 0.5));
  CHECK(wrap_angle(2 * pi) == 0.0);
}
