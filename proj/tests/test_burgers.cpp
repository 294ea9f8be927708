#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rvlab/burgers.hpp"

using namespace rvlab;

namespace {

// Exact integral of a piecewise-linear profile over [a, b]: the midpoint rule
// on each linear piece, split at the breakpoints.
double mass(const PiecewiseProfile& p, double a, double b) {
  std::vector<double> cuts{a};
  for (const Breakpoint& bp : p.points)
    if (bp.x > a && bp.x < b) cuts.push_back(bp.x);
  cuts.push_back(b);
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    m += p.value(0.5 * (cuts[i] + cuts[i + 1])) * (cuts[i + 1] - cuts[i]);
  return m;
}

RealField sampled(const PiecewiseProfile& p, double x_min, double x_max,
                  Eigen::Index n) {
  Grid1D grid(x_min, x_max, n);
  RealField f{grid, Eigen::ArrayXd(n), 0.0};
  for (Eigen::Index j = 0; j < n; ++j) f.values[j] = p.value(grid.x(j));
  return f;
}

double l1_error(const RealField& f, const PiecewiseProfile& exact) {
  double err = 0.0;
  for (Eigen::Index j = 0; j < f.grid.n; ++j)
    err += std::abs(f.values[j] - exact.value(f.grid.x(j)));
  return err * f.grid.dx();
}

}  // namespace

TEST_CASE("profile evaluation is right-continuous with linear interiors") {
  const PiecewiseProfile ramp = ramp_ic();
  CHECK(ramp.left_value() == 1.0);
  CHECK(ramp.right_value() == 0.0);
  CHECK(ramp.value(-2.0) == 1.0);
  CHECK(ramp.value(0.0) == 1.0);
  CHECK(ramp.value(0.5) == 0.5);
  CHECK(ramp.value(1.0) == 0.0);
  CHECK(ramp.value(4.0) == 0.0);
  CHECK(ramp.slope_after(0) == -1.0);
  CHECK(ramp.slope_after(1) == 0.0);

  const PiecewiseProfile step = step_ic();
  CHECK(step.value(-1e-12) == 1.0);
  CHECK(step.value(0.0) == 0.0);

  CHECK(profile_csv(ramp) == "x,u_left,u_right,slope_right\n"
                             "0,1,1,-1\n"
                             "1,0,0,0\n");
}

TEST_CASE("step data is a single shock moving at exactly half speed") {
  const PiecewiseProfile step = step_ic();
  for (double t : {0.5, 1.0, 2.0, 3.0, 10.0}) {
    const PiecewiseProfile e = evolve_exact(step, t);
    REQUIRE(e.points.size() == 1);
    CHECK(e.points[0].x == 0.5 * t);
    CHECK(e.points[0].u_left == 1.0);
    CHECK(e.points[0].u_right == 0.0);
    const std::vector<double> pos = shock_positions(e);
    REQUIRE(pos.size() == 1);
    CHECK(pos[0] == 0.5 * t);
  }
  // measured propagation speed, exact in floating point
  const double x1 = evolve_exact(step, 1.0).points[0].x;
  const double x3 = evolve_exact(step, 3.0).points[0].x;
  CHECK((x3 - x1) / 2.0 == 0.5);
}

TEST_CASE("ramp data steepens and breaks at time one") {
  const PiecewiseProfile ramp = ramp_ic();
  SUBCASE("before breaking: kinks only, slope grows like 1/(1-t)") {
    const PiecewiseProfile e = evolve_exact(ramp, 0.5);
    REQUIRE(e.points.size() == 2);
    CHECK(e.points[0].x == 0.5);
    CHECK(e.points[1].x == 1.0);
    CHECK(e.slope_after(0) == -2.0);
    CHECK(e.value(0.75) == 0.5);
    CHECK(shock_positions(e).empty());
  }
  SUBCASE("the gradient catastrophe lands exactly at x = 1, t = 1") {
    const PiecewiseProfile e = evolve_exact(ramp, 1.0);
    REQUIRE(e.points.size() == 1);
    CHECK(e.points[0].x == 1.0);
    CHECK(e.points[0].u_left == 1.0);
    CHECK(e.points[0].u_right == 0.0);
  }
  SUBCASE("afterwards the shock moves at half speed") {
    const PiecewiseProfile e = evolve_exact(ramp, 3.0);
    REQUIRE(e.points.size() == 1);
    CHECK(e.points[0].x == 2.0);
  }
}

TEST_CASE("shifted ramp and step become breakpoint-identical once broken") {
  const PiecewiseProfile step = step_ic();
  const PiecewiseProfile ramp = ramp_ic(-0.5);
  for (double t : {1.0, 1.1, 1.337, 1.5, 2.0, 2.75, 3.7, 10.0, 123.456}) {
    CAPTURE(t);
    const PiecewiseProfile a = evolve_exact(step, t);
    const PiecewiseProfile b = evolve_exact(ramp, t);
    REQUIRE(a.points.size() == 1);
    REQUIRE(b.points.size() == 1);
    CHECK(a.points[0].x == b.points[0].x);
    CHECK(a.points[0].u_left == b.points[0].u_left);
    CHECK(a.points[0].u_right == b.points[0].u_right);
    CHECK(profile_csv(a) == profile_csv(b));
  }
}

TEST_CASE("two shocks merge into one carrying the outer states") {
  const PiecewiseProfile two{{{0.0, 2.0, 1.0}, {1.0, 1.0, 0.0}}};
  SUBCASE("at the collision instant") {
    const PiecewiseProfile e = evolve_exact(two, 1.0);
    REQUIRE(e.points.size() == 1);
    CHECK(e.points[0].x == 1.5);
    CHECK(e.points[0].u_left == 2.0);
    CHECK(e.points[0].u_right == 0.0);
  }
  SUBCASE("afterwards, at the merged Rankine-Hugoniot speed") {
    const PiecewiseProfile e = evolve_exact(two, 2.0);
    REQUIRE(e.points.size() == 1);
    CHECK(e.points[0].x == 2.5);
  }
  SUBCASE("mass changes only by the boundary fluxes") {
    const double influx = 0.5 * (2.0 * 2.0 - 0.0);
    CHECK(mass(evolve_exact(two, 2.0), -5.0, 10.0) ==
          doctest::Approx(mass(two, -5.0, 10.0) + 2.0 * influx).epsilon(1e-13));
  }
}

TEST_CASE("an entropy-violating jump opens into a rarefaction fan") {
  const PiecewiseProfile jump{{{0.0, 0.0, 1.0}}};
  const PiecewiseProfile e = evolve_exact(jump, 2.0);
  REQUIRE(e.points.size() == 2);
  CHECK(e.points[0].x == 0.0);
  CHECK(e.points[1].x == 2.0);
  CHECK(e.points[0].u_left == 0.0);
  CHECK(e.points[0].u_right == 0.0);
  CHECK(e.points[1].u_left == 1.0);
  CHECK(e.points[1].u_right == 1.0);
  CHECK(e.value(1.0) == 0.5);
  CHECK(e.value(-0.5) == 0.0);
  CHECK(e.value(3.0) == 1.0);
  CHECK(shock_positions(e).empty());
}

TEST_CASE("a fan overtaking a shock bends its path onto sqrt(2t)") {
  // box of height one on (0, 1): the fan edge reaches the shock at t = 2,
  // after which the shock rides the fan with position sqrt(2t)
  const PiecewiseProfile box{{{0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}};
  SUBCASE("the catch-up instant") {
    const PiecewiseProfile e = evolve_exact(box, 2.0);
    REQUIRE(e.points.size() == 2);
    CHECK(e.points[0].x == 0.0);
    CHECK(e.points[1].x == 2.0);
    CHECK(e.points[1].u_left == 1.0);
    CHECK(e.points[1].u_right == 0.0);
  }
  SUBCASE("the bent path afterwards") {
    const PiecewiseProfile e = evolve_exact(box, 8.0);
    REQUIRE(e.points.size() == 2);
    CHECK(e.points[1].x == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(e.points[1].u_left == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(e.points[1].u_right == 0.0);
    CHECK(mass(e, -1.0, 10.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("a triangle bump sharpens into a decaying shock") {
  const PiecewiseProfile tri{
      {{-1.0, 0.0, 0.0}, {0.0, 1.0, 1.0}, {1.0, 0.0, 0.0}}};
  const double m0 = mass(tri, -5.0, 30.0);
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-14));

  const PiecewiseProfile e = evolve_exact(tri, 6.0);
  const std::vector<double> pos = shock_positions(e);
  REQUIRE(pos.size() == 1);
  // shock born at (1, 1), then s(t) = 2 sqrt((1 + t)/2) - 1
  const double s = 2.0 * std::sqrt(3.5) - 1.0;
  CHECK(pos[0] == doctest::Approx(s).epsilon(1e-13));
  CHECK(e.value(0.5 * (s - 1.0)) ==
        doctest::Approx(0.5 * (1.0 + s) / 3.5 * 0.5).epsilon(1e-12));
  CHECK(mass(e, -5.0, 30.0) == doctest::Approx(m0).epsilon(1e-13));
}

TEST_CASE("shock flanked by two ramps follows the characteristic ODE") {
  // rising ramp on the left, compressive ramp on the right; the reference
  // path integrates ds/dt = (u_left + u_right)/2 with a fine RK4 sweep
  const PiecewiseProfile p{
      {{-2.0, 0.0, 0.0}, {0.0, 1.0, 0.5}, {2.0, 0.0, 0.0}}};
  auto rhs = [](double s, double t) {
    const double ul = (1.0 + 0.5 * s) / (1.0 + 0.5 * t);
    const double ur = (0.5 - 0.25 * s) / (1.0 - 0.25 * t);
    return 0.5 * (ul + ur);
  };
  double s = 0.0, t = 0.0;
  const double h = 1e-5;
  while (t < 1.0 - 0.5 * h) {
    const double k1 = rhs(s, t);
    const double k2 = rhs(s + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = rhs(s + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = rhs(s + h * k3, t + h);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  const PiecewiseProfile e = evolve_exact(p, 1.0);
  REQUIRE(e.points.size() == 3);
  CHECK(e.points[1].x == doctest::Approx(s).epsilon(1e-9));
  CHECK(e.points[1].u_left ==
        doctest::Approx((1.0 + 0.5 * s) / 1.5).epsilon(1e-8));
  CHECK(e.points[1].u_right ==
        doctest::Approx((0.5 - 0.25 * s) / 0.75).epsilon(1e-8));
  CHECK(e.points[1].u_left > e.points[1].u_right);
  CHECK(mass(e, -10.0, 10.0) ==
        doctest::Approx(mass(p, -10.0, 10.0)).epsilon(1e-12));
}

TEST_CASE("godunov oracle converges to the exact solution at first order") {
  SUBCASE("constant data is a bitwise fixed point") {
    Grid1D grid(-8.0, 8.0, 64);
    RealField f{grid, Eigen::ArrayXd::Constant(64, 0.7), 0.0};
    const RealField g = evolve_godunov(f, 2.0);
    CHECK((g.values == f.values).all());
    CHECK(g.t == 2.0);
  }
  SUBCASE("moving shock, steepening ramp, and transonic fan refine at O(dx)") {
    const PiecewiseProfile fan{{{0.0, -1.0, 1.0}}};
    for (const PiecewiseProfile& ic : {step_ic(), ramp_ic(), fan}) {
      std::vector<double> err;
      for (Eigen::Index n : {128, 256, 512}) {
        const RealField u0 = sampled(ic, -8.0, 8.0, n);
        err.push_back(l1_error(evolve_godunov(u0, 2.0), evolve_exact(ic, 2.0)));
      }
      CAPTURE(err[0]);
      CHECK(err[2] < 0.2);
      CHECK(err[0] / err[1] > 1.4);
      CHECK(err[1] / err[2] > 1.4);
      CHECK(err[0] / err[1] < 3.4);
      CHECK(err[1] / err[2] < 3.4);
    }
  }
  SUBCASE("numerical shock sits within a few cells of x = t/2") {
    const RealField u0 = sampled(step_ic(), -8.0, 8.0, 512);
    const RealField u = evolve_godunov(u0, 4.0);
    double crossing = 8.0;
    for (Eigen::Index j = 0; j + 1 < u.grid.n; ++j)
      if (u.values[j] >= 0.5 && u.values[j + 1] < 0.5) {
        crossing = u.grid.x(j);
        break;
      }
    CHECK(std::abs(crossing - 2.0) < 3.0 * u.grid.dx());
  }
}

TEST_CASE("argument validation rejects malformed profiles and fields") {
  const PiecewiseProfile empty{};
  CHECK_THROWS_AS(evolve_exact(empty, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(shock_positions(empty), std::invalid_argument);
  CHECK_THROWS_AS(empty.value(0.0), std::invalid_argument);

  const PiecewiseProfile unordered{{{1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}}};
  CHECK_THROWS_AS(evolve_exact(unordered, 1.0), std::invalid_argument);
  const PiecewiseProfile bad{{{0.0, std::nan(""), 0.0}}};
  CHECK_THROWS_AS(evolve_exact(bad, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve_exact(step_ic(), -1.0), std::invalid_argument);

  const PiecewiseProfile same = evolve_exact(step_ic(), 0.0);
  CHECK(same.points[0].x == 0.0);

  Grid1D grid(-8.0, 8.0, 64);
  const RealField f{grid, Eigen::ArrayXd::Zero(64), 0.0};
  CHECK_THROWS_AS(evolve_godunov(f, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve_godunov(f, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve_godunov(f, -1.0), std::invalid_argument);
  const RealField skew{grid, Eigen::ArrayXd::Zero(32), 0.0};
  CHECK_THROWS_AS(evolve_godunov(skew, 1.0), std::invalid_argument);
  const RealField still = evolve_godunov(f, 0.5);
  CHECK((still.values == f.values).all());
  CHECK(still.t == 0.5);
}
