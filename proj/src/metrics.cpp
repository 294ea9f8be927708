#include "rvlab/metrics.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "rvlab/phi4.hpp"
#include "rvlab/spectral.hpp"

namespace rvlab {

namespace {

ComplexField difference(const ComplexField& psi, const ComplexField& psi_per,
                        const char* who) {
  if (!(psi.grid == psi_per.grid))
    throw std::invalid_argument(std::string(who) +
                                ": fields live on different grids");
  if (psi.values.size() != sample_count(psi.grid) ||
      psi_per.values.size() != psi.values.size())
    throw std::invalid_argument(std::string(who) + ": field size mismatch");
  ComplexField diff = psi;
  diff.values -= psi_per.values;
  return diff;
}

}  // namespace

double delta_p(const ComplexField& psi, const ComplexField& psi_per) {
  const ComplexField diff = difference(psi, psi_per, "delta_p");
  const double denom = l2_norm_sq(psi);
  if (denom <= 0.0)
    throw std::invalid_argument("delta_p: reference field has zero power");
  return l2_norm_sq(diff) / denom;
}

double delta_h1(const ComplexField& psi, const ComplexField& psi_per) {
  const ComplexField diff = difference(psi, psi_per, "delta_h1");
  const double denom = h1_norm_sq(psi);
  if (denom <= 0.0)
    throw std::invalid_argument("delta_h1: reference field has zero H1 norm");
  return h1_norm_sq(diff) / denom;
}

double delta_h1_tilde(const ComplexField& psi, const PerturbationSpec& spec) {
  if (psi.values.size() != sample_count(psi.grid))
    throw std::invalid_argument("delta_h1_tilde: field size mismatch");
  const double denom = h1_norm_sq(psi);
  if (denom <= 0.0)
    throw std::invalid_argument(
        "delta_h1_tilde: reference field has zero H1 norm");
  const double x_max = spec.param;
  double factor = 1.0;
  std::function<bool(double)> region = [x_max](double c) {
    return std::abs(c) >= x_max;
  };
  switch (spec.kind) {
    case PerturbationKind::truncate:
      break;
    case PerturbationKind::phase_flip_tail:
      factor = 4.0;
      break;
    case PerturbationKind::scale_tail:
      factor = (1.0 - spec.beta) * (1.0 - spec.beta);
      break;
    case PerturbationKind::block: {
      const double lo = spec.param, hi = spec.param + spec.width;
      region = [lo, hi](double c) {
        const double a = std::abs(c);
        return a < lo || a > hi;
      };
      break;
    }
    default:
      throw std::invalid_argument(
          "delta_h1_tilde: no tail variant for this perturbation kind");
  }
  return factor * h1_norm_sq_restricted(psi, region) / denom;
}

double delta_h_rel(const KleinGordonState& phi,
                   const KleinGordonState& phi_per) {
  if (!(phi.phi.grid == phi_per.phi.grid))
    throw std::invalid_argument("delta_h_rel: states live on different grids");
  const double h = energy(phi);
  if (h == 0.0)
    throw std::invalid_argument("delta_h_rel: reference state has zero energy");
  return (energy(phi_per) - h) / h;
}

MetricReport measure(const ComplexField& psi, const ComplexField& psi_per,
                     const PerturbationSpec& spec) {
  MetricReport report;
  report.delta_p = delta_p(psi, psi_per);
  switch (spec.kind) {
    case PerturbationKind::bandlimit:
      report.delta_h1 = delta_h1(psi, psi_per);
      report.notes = "delta_h1: band-limited copy stays differentiable";
      break;
    case PerturbationKind::block:
      report.delta_h1 = delta_h1(psi, psi_per);
      report.delta_h1_tilde = delta_h1_tilde(psi, spec);
      report.notes =
          "delta_h1: computed despite the band-edge jumps (discrete "
          "quadrature); delta_h1_tilde: band-complement region";
      break;
    case PerturbationKind::truncate:
    case PerturbationKind::phase_flip_tail:
    case PerturbationKind::scale_tail:
      report.delta_h1_tilde = delta_h1_tilde(psi, spec);
      report.notes =
          "delta_h1 undefined: the cut at x_max leaves the differentiable "
          "class; delta_h1_tilde reports the tail fraction instead";
      break;
    case PerturbationKind::digitize:
      report.notes =
          "delta_h1 undefined: intensity staircase leaves the differentiable "
          "class; no tail region, so no delta_h1_tilde either";
      break;
  }
  return report;
}

}  // namespace rvlab
