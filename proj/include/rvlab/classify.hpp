#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rvlab/field.hpp"
#include "rvlab/nls.hpp"

// Reads a back-propagated trajectory and renders the binary verdict: did the
// reversal split into outgoing beams again (reversibility maintained) or
// does a single on-axis beam persist (reversibility lost)?

namespace rvlab {

struct Peak {
  double x = 0.0;
  double intensity = 0.0;
};

enum class Outcome { split, single, ambiguous };

const char* to_string(Outcome outcome);

struct ReversalVerdict {
  Outcome outcome = Outcome::ambiguous;
  int peak_count = 0;
  std::vector<double> peak_positions;
  /// (z, separation) per snapshot; separation is the outermost peak
  /// distance, or 0 while fewer than two peaks exist.
  std::vector<std::pair<double, double>> separation_series;
  /// z-length of a transient double-peak stretch that re-merges before the
  /// trajectory ends; unset when no such stretch occurs.
  std::optional<double> ellipse_extent;
};

/// Local maxima of |psi|^2 at least eta times the global maximum and at
/// least d_min apart (strongest kept), positions refined by a quadratic fit
/// through the three samples around each maximum.  Plateaus are rejected;
/// the r = 0 axis sample can carry a peak on radial grids.
std::vector<Peak> detect_peaks(const ComplexField& field, double eta = 0.1,
                               double d_min = 1.0);

/// Verdict for a trajectory that ends at z = 0.  Split requires at least two
/// endpoint peaks whose separation never shrinks over the trailing
/// window_fraction of the run (outward motion — a transient double peak that
/// re-merges does not count); single means one dominant endpoint peak;
/// everything else is ambiguous.
ReversalVerdict classify_reversal(const Trajectory& trajectory,
                                  double window_fraction = 0.15,
                                  double eta = 0.1, double d_min = 1.0);

/// Relative L2 distance between the recovered endpoint and the original
/// input, minimized over a global phase factor.
double input_recovery_error(const ComplexField& recovered,
                            const ComplexField& psi0);
double input_recovery_error(const Trajectory& trajectory,
                            const ComplexField& psi0);

}  // namespace rvlab
