#include "rvlab/phi4.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rvlab/errors.hpp"

namespace rvlab {

namespace {

void accel(const Eigen::ArrayXd& phi, double dx, Eigen::ArrayXd& out) {
  const Eigen::Index n = phi.size();
  const double inv = 1.0 / (dx * dx);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double left = phi[j == 0 ? n - 1 : j - 1];
    const double right = phi[j == n - 1 ? 0 : j + 1];
    out[j] = (left - 2.0 * phi[j] + right) * inv + phi[j] -
             phi[j] * phi[j] * phi[j];
  }
}

double pick_dt(const Grid1D& grid, double dt) {
  const double limit = 0.5 * grid.dx();
  if (dt == 0.0) return limit;
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument("phi4: require 0 < dt <= dx/2");
  return dt;
}

void validate(const KleinGordonState& state) {
  if (!(state.phi.grid == state.pi.grid))
    throw std::invalid_argument("phi4: phi and pi must share a grid");
  if (state.phi.t != state.pi.t)
    throw std::invalid_argument("phi4: phi and pi must carry the same time");
}

}  // namespace

KleinGordonState step(const KleinGordonState& state, double dt) {
  validate(state);
  const double dt_eff = pick_dt(state.phi.grid, dt);
  KleinGordonState out = state;
  Eigen::ArrayXd a(out.phi.values.size());
  accel(out.phi.values, out.phi.grid.dx(), a);
  out.pi.values += 0.5 * dt_eff * a;
  out.phi.values += dt_eff * out.pi.values;
  accel(out.phi.values, out.phi.grid.dx(), a);
  out.pi.values += 0.5 * dt_eff * a;
  out.phi.t += dt_eff;
  out.pi.t = out.phi.t;
  return out;
}

KgTrajectory propagate(const KleinGordonState& state, double t_target,
                       int snapshot_stride, double dt) {
  validate(state);
  if (snapshot_stride < 1)
    throw std::invalid_argument("phi4: snapshot_stride must be >= 1");
  const double t0 = state.phi.t;
  if (!(t_target > t0))
    throw std::invalid_argument("phi4: t_target must exceed the state time");
  const double base = pick_dt(state.phi.grid, dt);
  const double span = t_target - t0;
  // uniform steps spanning exactly [t0, t_target]: a backward run with the
  // same arguments retraces the identical step sequence
  const long steps = std::max(1L, static_cast<long>(std::ceil(span / base - 1e-9)));
  const double dt_eff = span / static_cast<double>(steps);

  KgTrajectory traj;
  Eigen::ArrayXd phi = state.phi.values;
  Eigen::ArrayXd pi = state.pi.values;
  const double dx = state.phi.grid.dx();
  Eigen::ArrayXd a(phi.size());

  auto record = [&](double t_now) {
    if (!phi.allFinite() || !pi.allFinite())
      throw SolverAbort("phi4: non-finite field", t_now);
    traj.snapshots.push_back(KleinGordonState{
        RealField{state.phi.grid, phi, t_now},
        RealField{state.pi.grid, pi, t_now}});
  };

  record(t0);
  accel(phi, dx, a);
  for (long s = 1; s <= steps; ++s) {
    pi += 0.5 * dt_eff * a;
    phi += dt_eff * pi;
    accel(phi, dx, a);
    pi += 0.5 * dt_eff * a;
    const double t_now =
        (s == steps) ? t_target : t0 + static_cast<double>(s) * dt_eff;
    if (s == steps || s % snapshot_stride == 0) record(t_now);
  }
  return traj;
}

KgTrajectory reverse(const KleinGordonState& state, double t_back,
                     int snapshot_stride, double dt) {
  if (!(t_back > 0.0))
    throw std::invalid_argument("phi4: t_back must be positive");
  const double t0 = state.phi.t;
  KleinGordonState flipped = state;
  flipped.pi.values = -flipped.pi.values;
  KgTrajectory traj;
  try {
    traj = propagate(flipped, t0 + t_back, snapshot_stride, dt);
  } catch (const SolverAbort& abort) {
    throw SolverAbort(abort.what(), 2.0 * t0 - abort.z);
  }
  for (KleinGordonState& snap : traj.snapshots) {
    snap.pi.values = -snap.pi.values;
    snap.phi.t = 2.0 * t0 - snap.phi.t;
    snap.pi.t = snap.phi.t;
  }
  return traj;
}

double energy(const KleinGordonState& state) {
  validate(state);
  const Eigen::ArrayXd& phi = state.phi.values;
  const Eigen::ArrayXd& pi = state.pi.values;
  const Eigen::Index n = phi.size();
  const double dx = state.phi.grid.dx();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double left = phi[j == 0 ? n - 1 : j - 1];
    const double right = phi[j == n - 1 ? 0 : j + 1];
    const double grad = (right - left) / (2.0 * dx);
    const double dev = phi[j] * phi[j] - 1.0;
    sum += 0.5 * pi[j] * pi[j] + 0.5 * grad * grad + 0.25 * dev * dev;
  }
  return sum * dx;
}

std::vector<TrackSample> track_antikink(const KgTrajectory& trajectory) {
  std::vector<TrackSample> series;
  series.reserve(trajectory.snapshots.size());
  for (const KleinGordonState& snap : trajectory.snapshots) {
    const Grid1D& grid = snap.phi.grid;
    const Eigen::ArrayXd& phi = snap.phi.values;
    TrackSample sample;
    sample.t = snap.phi.t;
    int found = 0;
    for (Eigen::Index j = grid.n / 2; j + 1 < grid.n; ++j) {
      if (phi[j] >= 0.0 && phi[j + 1] < 0.0) {
        const double frac = phi[j] / (phi[j] - phi[j + 1]);
        const double x = grid.x(j) + frac * grid.dx();
        if (x > 0.0) {
          ++found;
          sample.x = x;
        }
      }
    }
    sample.ambiguous = (found != 1);
    if (sample.ambiguous) sample.x = 0.0;
    series.push_back(sample);
  }
  return series;
}

CollisionOutcome classify_collision(const KgTrajectory& trajectory,
                                    double proximity, double escape_radius) {
  const std::vector<TrackSample> series = track_antikink(trajectory);
  CollisionOutcome outcome;
  if (series.empty()) return outcome;

  // contact episodes: tracker lost, or separation below the proximity gate
  auto in_contact = [&](const TrackSample& s) {
    return s.ambiguous || 2.0 * s.x < proximity;
  };
  size_t i = 0;
  while (i < series.size()) {
    if (!in_contact(series[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    double best_sep = std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    double ambig_first = 0.0, ambig_last = 0.0;
    bool merged = false;
    while (j < series.size() && in_contact(series[j])) {
      if (series[j].ambiguous) {
        if (!merged) ambig_first = series[j].t;
        ambig_last = series[j].t;
        merged = true;
      } else if (2.0 * series[j].x < best_sep) {
        best_sep = 2.0 * series[j].x;
        best_t = series[j].t;
      }
      ++j;
    }
    // while the cores overlap the tracker reports no crossing; the center of
    // that stretch is the collision instant, and it beats the closest tracked
    // approach, which only brackets the overlap from one side
    if (merged)
      outcome.bounce_times.push_back(0.5 * (ambig_first + ambig_last));
    else if (std::isfinite(best_sep))
      outcome.bounce_times.push_back(best_t);
    else
      outcome.bounce_times.push_back(0.5 * (series[i].t + series[j - 1].t));
    i = j;
  }

  // fitted outgoing speed over the trailing valid window
  const double t_end = series.back().t;
  const double window = std::max(5.0, 0.1 * std::abs(t_end - series.front().t));
  double sx = 0, st = 0, sxt = 0, stt = 0;
  int count = 0;
  for (auto it = series.rbegin(); it != series.rend(); ++it) {
    if (std::abs(t_end - it->t) > window) break;
    if (it->ambiguous) continue;
    sx += it->x;
    st += it->t;
    sxt += it->x * it->t;
    stt += it->t * it->t;
    ++count;
  }
  if (count >= 2) {
    const double denom = count * stt - st * st;
    // positive speed = moving outward along the trajectory's own ordering,
    // so reversed runs (t counting down) classify the same way
    const double direction = series.back().t >= series.front().t ? 1.0 : -1.0;
    if (denom != 0.0)
      outcome.final_speed = direction * (count * sxt - sx * st) / denom;
  }

  const TrackSample& last = series.back();
  const bool out = !last.ambiguous && 2.0 * last.x > escape_radius &&
                   outcome.final_speed > 0.0;
  outcome.kind = out ? CollisionOutcome::Kind::escape
                     : CollisionOutcome::Kind::capture;
  return outcome;
}

}  // namespace rvlab
