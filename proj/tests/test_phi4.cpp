#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "rvlab/errors.hpp"
#include "rvlab/phi4.hpp"
#include "rvlab/waves.hpp"

using namespace rvlab;

namespace {

constexpr double kKinkEnergy = 0.9428090415820634;  // 2*sqrt(2)/3

Grid1D domain(int log2_n) { return Grid1D(-32.0, 32.0, Eigen::Index(1) << log2_n); }

double rel_l2(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  return std::sqrt((a - b).square().sum() / b.square().sum());
}

// half-width of the tracked antikink, read off the +/-0.6 level crossings
double core_width(const KleinGordonState& state, double center) {
  const Grid1D& g = state.phi.grid;
  double inner = 0.0, outer = 0.0;
  for (Eigen::Index j = 0; j + 1 < g.n; ++j) {
    const double xj = g.x(j);
    if (std::abs(xj - center) > 4.0) continue;
    const double a = state.phi.values[j], b = state.phi.values[j + 1];
    for (double level : {0.6, -0.6}) {
      if ((a >= level) != (b >= level)) {
        const double x = xj + g.dx() * (a - level) / (a - b);
        (level > 0.0 ? inner : outer) = x;
      }
    }
  }
  return outer - inner;
}

}  // namespace

TEST_CASE("vacuum state is a fixed point with zero energy") {
  const Grid1D g = domain(10);
  KleinGordonState vac{RealField{g, Eigen::ArrayXd::Constant(g.n, -1.0), 0.0},
                       RealField{g, Eigen::ArrayXd::Zero(g.n), 0.0}};
  CHECK(energy(vac) == 0.0);
  const KgTrajectory traj = propagate(vac, 10.0, 64);
  CHECK((traj.final_state().phi.values + 1.0).abs().maxCoeff() < 1e-14);
  CHECK(traj.final_state().pi.values.abs().maxCoeff() < 1e-14);
}

TEST_CASE("kink pair energy matches the closed form, at rest and boosted") {
  const Grid1D g = domain(13);
  CHECK(energy(kink_antikink_ic(g, 0.0, 16.0)) ==
        doctest::Approx(2.0 * kKinkEnergy).epsilon(1e-3));
  const double v = 0.6;
  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  CHECK(energy(kink_antikink_ic(g, v, 16.0)) ==
        doctest::Approx(2.0 * gamma * kKinkEnergy).epsilon(1e-3));
}

TEST_CASE("far-separated static pair stays static") {
  const Grid1D g = domain(14);
  const KleinGordonState ic = kink_antikink_ic(g, 0.0, 16.0);
  const KgTrajectory traj = propagate(ic, 75.0, 1 << 20);
  CHECK((traj.final_state().phi.values - ic.phi.values).abs().maxCoeff() <
        1e-6);
}

TEST_CASE("energy is conserved through a capture collision") {
  const Grid1D g = domain(13);
  const KleinGordonState ic = kink_antikink_ic(g, 0.21, 7.9);
  const KgTrajectory traj = propagate(ic, 75.0, 1 << 20);
  const double h0 = energy(ic);
  CHECK(std::abs(energy(traj.final_state()) - h0) / h0 < 1e-5);
}

TEST_CASE("reverse retraces a collision back to its input") {
  const Grid1D g = domain(13);
  const KleinGordonState ic = kink_antikink_ic(g, 0.19622, 7.9);
  const KgTrajectory fwd = propagate(ic, 75.0, 1 << 20);
  const KgTrajectory back = reverse(fwd.final_state(), 75.0, 256);

  CHECK(back.initial_state().phi.t == 75.0);
  CHECK(back.final_state().phi.t == 0.0);
  for (std::size_t i = 1; i < back.snapshots.size(); ++i)
    CHECK(back.snapshots[i].phi.t < back.snapshots[i - 1].phi.t);

  CHECK(rel_l2(back.final_state().phi.values, ic.phi.values) < 1e-10);
  CHECK(rel_l2(back.final_state().pi.values, ic.pi.values) < 1e-10);
}

TEST_CASE("collision regimes at the calibrated separation") {
  const Grid1D g = domain(13);
  const double x0 = 7.9;

  const KgTrajectory cap = propagate(kink_antikink_ic(g, 0.21, x0), 75.0, 16);
  const CollisionOutcome oc = classify_collision(cap, 4.0, 6.0);
  CHECK(oc.kind == CollisionOutcome::Kind::capture);
  REQUIRE(oc.bounce_times.size() >= 2);
  CHECK(oc.bounce_times[0] == doctest::Approx(32.16).epsilon(0.015));

  const KgTrajectory two =
      propagate(kink_antikink_ic(g, 0.19622, x0), 75.0, 16);
  const CollisionOutcome ot = classify_collision(two, 4.0, 6.0);
  CHECK(ot.kind == CollisionOutcome::Kind::escape);
  REQUIRE(ot.bounce_times.size() == 2);
  CHECK(ot.bounce_times[0] == doctest::Approx(34.06).epsilon(0.015));
  CHECK(ot.bounce_times[1] == doctest::Approx(51.72).epsilon(0.015));
  CHECK(ot.bounce_times[0] < ot.bounce_times[1]);
  CHECK(ot.final_speed == doctest::Approx(0.1415).epsilon(0.05));

  // the escaped pair has only reached separation ~8 by t_f, so a wide enough
  // radius gate reports it still bound; the gate is honored either way
  CHECK(classify_collision(two, 4.0, 15.0).kind ==
        CollisionOutcome::Kind::capture);

  const KgTrajectory one = propagate(kink_antikink_ic(g, 0.5, x0), 75.0, 16);
  const CollisionOutcome oo = classify_collision(one, 4.0, 6.0);
  CHECK(oo.kind == CollisionOutcome::Kind::escape);
  REQUIRE(oo.bounce_times.size() == 1);
  CHECK(oo.bounce_times[0] == doctest::Approx(15.59).epsilon(0.02));
  CHECK(oo.final_speed == doctest::Approx(0.388).epsilon(0.03));
}

TEST_CASE("antikink tracking: static, moving, and Lorentz-contracted") {
  const Grid1D g = domain(12);

  const KgTrajectory still = propagate(kink_antikink_ic(g, 0.0, 16.0), 10.0, 8);
  for (const TrackSample& s : track_antikink(still)) {
    CHECK(!s.ambiguous);
    CHECK(std::abs(s.x - 16.0) <= g.dx());
  }

  const double v = 0.6;
  const KgTrajectory moving = propagate(kink_antikink_ic(g, v, 16.0), 10.0, 8);
  const std::vector<TrackSample> track = track_antikink(moving);
  double st = 0, sx = 0, sxt = 0, stt = 0;
  int count = 0;
  for (const TrackSample& s : track) {
    CHECK(!s.ambiguous);
    if (s.t < 2.0) continue;
    st += s.t;
    sx += s.x;
    sxt += s.x * s.t;
    stt += s.t * s.t;
    ++count;
  }
  const double slope = (count * sxt - sx * st) / (count * stt - st * st);
  CHECK(slope == doctest::Approx(-v).epsilon(0.01));
  CHECK(track.back().x == doctest::Approx(16.0 - 10.0 * v).epsilon(0.005));

  const double w_moving = core_width(moving.final_state(), track.back().x);
  const double w_rest = core_width(still.final_state(), 16.0);
  CHECK(w_moving / w_rest == doctest::Approx(std::sqrt(1.0 - v * v)).epsilon(0.02));
}

TEST_CASE("argument validation and abort reporting") {
  const Grid1D g = domain(10);
  const KleinGordonState ic = kink_antikink_ic(g, 0.2, 7.0);

  CHECK_THROWS_AS(propagate(ic, 10.0, 64, g.dx()), std::invalid_argument);
  CHECK_THROWS_AS(propagate(ic, 10.0, 64, -0.01), std::invalid_argument);
  CHECK_THROWS_AS(propagate(ic, 10.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(propagate(ic, 0.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(reverse(ic, 0.0, 64), std::invalid_argument);

  KleinGordonState skewed = ic;
  skewed.pi.t = 1.0;
  CHECK_THROWS_AS(propagate(skewed, 10.0, 64), std::invalid_argument);
  KleinGordonState other_grid = ic;
  other_grid.pi = RealField{domain(9), Eigen::ArrayXd::Zero(1 << 9), 0.0};
  CHECK_THROWS_AS(propagate(other_grid, 10.0, 64), std::invalid_argument);

  KleinGordonState poisoned = ic;
  poisoned.phi.t = poisoned.pi.t = 5.0;
  poisoned.phi.values[3] = std::numeric_limits<double>::quiet_NaN();
  try {
    propagate(poisoned, 10.0, 64);
    FAIL("expected SolverAbort");
  } catch (const SolverAbort& abort) {
    CHECK(abort.z == 5.0);
  }

  const KleinGordonState stepped = step(ic, 0.0);
  CHECK(stepped.phi.t == doctest::Approx(0.5 * g.dx()));
}
