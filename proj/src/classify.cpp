#include "rvlab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rvlab/spectral.hpp"

namespace rvlab {

namespace {

double outer_separation(const std::vector<Peak>& peaks) {
  if (peaks.size() < 2) return 0.0;
  return peaks.back().x - peaks.front().x;
}

}  // namespace

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::split: return "split";
    case Outcome::single: return "single";
    case Outcome::ambiguous: return "ambiguous";
  }
  throw std::invalid_argument("to_string: unknown outcome");
}

std::vector<Peak> detect_peaks(const ComplexField& field, double eta,
                               double d_min) {
  if (field.values.size() != sample_count(field.grid))
    throw std::invalid_argument("detect_peaks: field size mismatch");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("detect_peaks: eta must be in (0, 1)");
  if (!(d_min > 0.0))
    throw std::invalid_argument("detect_peaks: d_min must be positive");

  const Eigen::Index n = field.values.size();
  const Eigen::ArrayXd I = field.values.abs2();
  const double gmax = I.maxCoeff();
  if (!(gmax > 0.0)) return {};
  const bool periodic = std::holds_alternative<Grid1D>(field.grid);
  const double dx = spacing(field.grid);

  std::vector<Peak> candidates;
  auto at = [&](Eigen::Index j) { return I[(j % n + n) % n]; };
  for (Eigen::Index j = 0; j < n; ++j) {
    double left, right;
    if (periodic) {
      left = at(j - 1);
      right = at(j + 1);
    } else {
      // the axis sample peaks whenever the profile falls away from r = 0
      left = (j == 0) ? -1.0 : I[j - 1];
      if (j == n - 1) continue;
      right = I[j + 1];
    }
    if (!(I[j] > left && I[j] > right)) continue;
    if (I[j] < eta * gmax) continue;
    Peak p{coord(field.grid, j), I[j]};
    if (left >= 0.0) {
      const double curve = left - 2.0 * I[j] + right;
      if (curve < 0.0) {
        const double d = 0.5 * (left - right) / curve;
        p.x += d * dx;
        p.intensity = I[j] - 0.25 * (left - right) * d;
      }
    }
    candidates.push_back(p);
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Peak& a, const Peak& b) {
              return a.intensity > b.intensity;
            });
  std::vector<Peak> kept;
  for (const Peak& c : candidates) {
    bool clear = true;
    for (const Peak& k : kept)
      if (std::abs(c.x - k.x) < d_min) {
        clear = false;
        break;
      }
    if (clear) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Peak& a, const Peak& b) { return a.x < b.x; });
  return kept;
}

ReversalVerdict classify_reversal(const Trajectory& trajectory,
                                  double window_fraction, double eta,
                                  double d_min) {
  if (trajectory.snapshots.empty())
    throw std::invalid_argument("classify_reversal: empty trajectory");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument(
        "classify_reversal: window_fraction must be in (0, 1]");

  ReversalVerdict verdict;
  std::vector<int> counts;
  counts.reserve(trajectory.snapshots.size());
  for (const ComplexField& snap : trajectory.snapshots) {
    const std::vector<Peak> peaks = detect_peaks(snap, eta, d_min);
    counts.push_back(static_cast<int>(peaks.size()));
    verdict.separation_series.emplace_back(snap.z, outer_separation(peaks));
  }

  const std::vector<Peak> end_peaks =
      detect_peaks(trajectory.snapshots.back(), eta, d_min);
  verdict.peak_count = static_cast<int>(end_peaks.size());
  for (const Peak& p : end_peaks) verdict.peak_positions.push_back(p.x);

  const std::size_t total = verdict.separation_series.size();
  const auto window_begin =
      static_cast<std::size_t>(std::floor((1.0 - window_fraction) *
                                          static_cast<double>(total - 1)));
  bool outward = verdict.peak_count >= 2;
  for (std::size_t k = window_begin; outward && k + 1 < total; ++k) {
    const double prev = verdict.separation_series[k].second;
    const double next = verdict.separation_series[k + 1].second;
    if (next < prev * 0.995 - 1e-9) outward = false;
    if (counts[k] < 2) outward = false;
  }

  if (verdict.peak_count >= 2 && outward)
    verdict.outcome = Outcome::split;
  else if (verdict.peak_count == 1)
    verdict.outcome = Outcome::single;
  else
    verdict.outcome = Outcome::ambiguous;

  // longest stretch of exactly two peaks that re-merges before the end
  double best = 0.0;
  std::size_t run_start = total;
  for (std::size_t k = 0; k <= total; ++k) {
    const bool two = k < total && counts[k] == 2;
    if (two && run_start == total) run_start = k;
    if (!two && run_start < total) {
      const bool remerges = k < total && counts[k] < 2;
      if (remerges) {
        const double z0 = trajectory.snapshots[run_start].z;
        const double z1 = trajectory.snapshots[k - 1].z;
        best = std::max(best, std::abs(z1 - z0));
      }
      run_start = total;
    }
  }
  if (best > 0.0) verdict.ellipse_extent = best;
  return verdict;
}

double input_recovery_error(const ComplexField& recovered,
                            const ComplexField& psi0) {
  if (!(recovered.grid == psi0.grid))
    throw std::invalid_argument(
        "input_recovery_error: fields live on different grids");
  if (recovered.values.size() != sample_count(recovered.grid) ||
      psi0.values.size() != recovered.values.size())
    throw std::invalid_argument("input_recovery_error: field size mismatch");
  const double p0 = l2_norm_sq(psi0);
  if (p0 <= 0.0)
    throw std::invalid_argument("input_recovery_error: reference is zero");
  const Eigen::ArrayXd w = quadrature_weights(psi0.grid);
  const Complex overlap =
      (w * (psi0.values.conjugate() * recovered.values)).sum();
  const double d2 =
      l2_norm_sq(recovered) + p0 - 2.0 * std::abs(overlap);
  return std::sqrt(std::max(0.0, d2) / p0);
}

double input_recovery_error(const Trajectory& trajectory,
                            const ComplexField& psi0) {
  if (trajectory.snapshots.empty())
    throw std::invalid_argument("input_recovery_error: empty trajectory");
  return input_recovery_error(trajectory.final_state(), psi0);
}

}  // namespace rvlab
