#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rvlab/field.hpp"

namespace rvlab {

/// One node of a piecewise-linear profile.  A node with u_left == u_right is
/// a slope kink; u_left > u_right is an entropy shock.  Inputs may carry
/// u_left < u_right, which evolve_exact opens into a rarefaction fan.
struct Breakpoint {
  double x = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
};

/// Piecewise-linear profile with jumps only at breakpoints: constant at
/// points.front().u_left before the first node, linear between consecutive
/// nodes (u_right of the left node to u_left of the right node), constant at
/// points.back().u_right after the last node.
struct PiecewiseProfile {
  std::vector<Breakpoint> points;

  double left_value() const;
  double right_value() const;
  /// Slope of the segment between node i and node i+1.
  double slope_after(std::size_t i) const;
  /// Pointwise evaluation; right-continuous at jumps.
  double value(double x) const;
};

/// Unit step: 1 for x < 0, 0 for x >= 0.
PiecewiseProfile step_ic();

/// Unit ramp anchored at `shift`: 1 below, linear 1 -> 0 across
/// [shift, shift+1), 0 above.
PiecewiseProfile ramp_ic(double shift = 0.0);

/// Entropy solution at time t by exact front tracking: characteristics on
/// linear segments, Rankine-Hugoniot shock paths in closed form, events
/// (gradient catastrophe, shock absorbing a node, shocks merging) processed
/// as adjacent-node coincidences.  Rarefaction-admissible input jumps open
/// into fans.
PiecewiseProfile evolve_exact(const PiecewiseProfile& profile, double t);

/// Positions of the entropy-satisfying discontinuities (u_left > u_right).
std::vector<double> shock_positions(const PiecewiseProfile& profile);

/// First-order Godunov scheme with the exact Riemann flux and outflow
/// boundaries; cfl is the Courant number (<= 0.9) applied to the initial
/// maximum speed.
RealField evolve_godunov(const RealField& u0, double t, double cfl = 0.9);

/// Breakpoint table as CSV: x, u_left, u_right, slope_right.
std::string profile_csv(const PiecewiseProfile& profile);

}  // namespace rvlab
