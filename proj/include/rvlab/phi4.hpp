#pragma once

#include <vector>

#include "rvlab/waves.hpp"

// Leapfrog evolution of the phi^4 field  phi_tt = phi_xx + phi - phi^3  on a
// periodic grid, with the collision diagnostics used by the kink-antikink
// experiments: energy functional, antikink tracking, and capture/escape
// classification.  Backward evolution goes through the t -> -t symmetry
// (negate pi, run forward), so a round trip retraces the leapfrog exactly.

namespace rvlab {

struct KgTrajectory {
  std::vector<KleinGordonState> snapshots;

  const KleinGordonState& initial_state() const { return snapshots.front(); }
  const KleinGordonState& final_state() const { return snapshots.back(); }
};

/// One kick-drift-kick leapfrog step.  Requires dt <= dx/2.
KleinGordonState step(const KleinGordonState& state, double dt);

/// Evolves to the absolute time t_target, recording every snapshot_stride-th
/// step plus the initial and final states.  dt = 0 picks the default dx/2.
KgTrajectory propagate(const KleinGordonState& state, double t_target,
                       int snapshot_stride = 64, double dt = 0.0);

/// Backward evolution via the time-reversal symmetry: negates pi, runs
/// propagate for t_back, negates pi in every snapshot; reported times count
/// down from the input state's time.
KgTrajectory reverse(const KleinGordonState& state, double t_back,
                     int snapshot_stride = 64, double dt = 0.0);

/// Integral of  pi^2/2 + phi_x^2/2 + (phi^2 - 1)^2/4  with centered phi_x.
double energy(const KleinGordonState& state);

struct TrackSample {
  double t = 0.0;
  double x = 0.0;
  bool ambiguous = false;  // no unique antikink crossing in x > 0
};

/// Sub-grid antikink position per snapshot: the unique downward zero crossing
/// of phi restricted to x > 0.  Snapshots with zero or multiple qualifying
/// crossings are marked ambiguous (x is meaningless there).
std::vector<TrackSample> track_antikink(const KgTrajectory& trajectory);

struct CollisionOutcome {
  enum class Kind { capture, escape };

  Kind kind = Kind::capture;
  std::vector<double> bounce_times;  // in evolution order, one per episode
  double final_speed = 0.0;          // fitted antikink speed at the end
};

/// Classifies a symmetric kink-antikink run.  Bounces are contact episodes
/// where the tracked separation 2 x_antikink drops below proximity (or the
/// tracker loses the antikink entirely); each episode's bounce instant is the
/// center of the tracker-lost stretch when the cores overlap, otherwise the
/// closest tracked approach.  Escape means the final separation exceeds
/// escape_radius with the antikink still moving outward.
CollisionOutcome classify_collision(const KgTrajectory& trajectory,
                                    double proximity = 4.0,
                                    double escape_radius = 15.0);

}  // namespace rvlab
