#include "rvlab/perturb.hpp"

#include <cmath>
#include <stdexcept>

#include "rvlab/spectral.hpp"

namespace rvlab {

namespace {

void check_sizes(const ComplexField& field, const char* who) {
  if (field.values.size() != sample_count(field.grid))
    throw std::invalid_argument(std::string(who) + ": field size mismatch");
}

// Distance from the origin of sample j, and the largest radius the domain
// reaches on both sides (r_max on radial grids).
double coord_abs(const Grid& grid, Eigen::Index j) {
  if (const auto* p = std::get_if<Grid1D>(&grid)) return std::abs(p->x(j));
  return std::get<RadialGrid>(grid).r(j);
}

double half_width(const Grid& grid) {
  if (const auto* p = std::get_if<Grid1D>(&grid))
    return std::min(-p->x_min, p->x_max);
  return std::get<RadialGrid>(grid).r_max;
}

void check_tail_radius(const ComplexField& field, double x_max,
                       const char* who) {
  check_sizes(field, who);
  if (!std::isfinite(x_max) || x_max <= 0.0)
    throw std::invalid_argument(std::string(who) + ": x_max must be positive");
}

// Applies f to every sample in the tail |x| >= x_max.
template <class F>
ComplexField map_tail(const ComplexField& field, double x_max, F&& f) {
  ComplexField out = field;
  if (x_max >= half_width(field.grid)) return out;
  for (Eigen::Index j = 0; j < out.values.size(); ++j)
    if (coord_abs(out.grid, j) >= x_max) out.values[j] = f(out.values[j]);
  return out;
}

}  // namespace

const char* to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::truncate: return "truncate";
    case PerturbationKind::bandlimit: return "bandlimit";
    case PerturbationKind::phase_flip_tail: return "phase_flip_tail";
    case PerturbationKind::scale_tail: return "scale_tail";
    case PerturbationKind::block: return "block";
    case PerturbationKind::digitize: return "digitize";
  }
  throw std::invalid_argument("to_string: unknown perturbation kind");
}

PerturbationKind perturbation_kind_from(const std::string& name) {
  for (PerturbationKind k :
       {PerturbationKind::truncate, PerturbationKind::bandlimit,
        PerturbationKind::phase_flip_tail, PerturbationKind::scale_tail,
        PerturbationKind::block, PerturbationKind::digitize})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("perturbation_kind_from: unknown kind \"" +
                              name + "\"");
}

ComplexField apply(const ComplexField& field, const PerturbationSpec& spec) {
  switch (spec.kind) {
    case PerturbationKind::truncate: return truncate(field, spec.param);
    case PerturbationKind::bandlimit: return bandlimit(field, spec.param);
    case PerturbationKind::phase_flip_tail:
      return phase_flip_tail(field, spec.param);
    case PerturbationKind::scale_tail:
      return scale_tail(field, spec.param, spec.beta);
    case PerturbationKind::block: return block(field, spec.param, spec.width);
    case PerturbationKind::digitize: return digitize(field, spec.param);
  }
  throw std::invalid_argument("apply: unknown perturbation kind");
}

ComplexField truncate(const ComplexField& field, double x_max) {
  check_tail_radius(field, x_max, "truncate");
  return map_tail(field, x_max, [](Complex) { return Complex(0.0, 0.0); });
}

ComplexField truncate_soft(const ComplexField& field, double x_max,
                           double ramp_width) {
  check_tail_radius(field, x_max, "truncate_soft");
  if (!std::isfinite(ramp_width) || ramp_width <= 0.0)
    throw std::invalid_argument("truncate_soft: ramp_width must be positive");
  ComplexField out = field;
  if (x_max >= half_width(field.grid)) return out;
  for (Eigen::Index j = 0; j < out.values.size(); ++j) {
    const double d = coord_abs(out.grid, j) - x_max;
    if (d < 0.0) continue;
    const double w = 1.0 - d / ramp_width;
    out.values[j] *= (w > 0.0) ? w : 0.0;
  }
  return out;
}

ComplexField bandlimit(const ComplexField& field, double k_max) {
  check_sizes(field, "bandlimit");
  if (!std::holds_alternative<Grid1D>(field.grid))
    throw std::invalid_argument(
        "bandlimit: radial geometry unsupported, periodic 1D fields only");
  if (!std::isfinite(k_max) || k_max <= 0.0)
    throw std::invalid_argument("bandlimit: k_max must be positive");
  const Grid1D& grid = std::get<Grid1D>(field.grid);
  const double nyquist =
      std::numbers::pi_v<double> * static_cast<double>(grid.n) / grid.length();
  if (k_max >= nyquist) return field;
  Spectrum spec = forward_transform(field);
  for (Eigen::Index m = 0; m < grid.n; ++m)
    if (std::abs(spec.wavenumber(m)) > k_max) spec.coeffs[m] = 0.0;
  return inverse_transform(spec);
}

ComplexField phase_flip_tail(const ComplexField& field, double x_max) {
  check_tail_radius(field, x_max, "phase_flip_tail");
  return map_tail(field, x_max, [](Complex v) { return -v; });
}

ComplexField scale_tail(const ComplexField& field, double x_max, double beta) {
  check_tail_radius(field, x_max, "scale_tail");
  if (!std::isfinite(beta))
    throw std::invalid_argument("scale_tail: beta must be finite");
  return map_tail(field, x_max, [beta](Complex v) { return beta * v; });
}

ComplexField block(const ComplexField& field, double x_b, double width) {
  check_sizes(field, "block");
  if (!std::isfinite(x_b) || x_b <= 0.0)
    throw std::invalid_argument("block: x_b must be positive");
  if (!std::isfinite(width) || width <= 0.0)
    throw std::invalid_argument("block: width must be positive");
  if (x_b + width > half_width(field.grid))
    throw std::invalid_argument("block: band extends outside the domain");
  ComplexField out = field;
  for (Eigen::Index j = 0; j < out.values.size(); ++j) {
    const double a = coord_abs(out.grid, j);
    if (a > x_b && a < x_b + width) out.values[j] = 0.0;
  }
  return out;
}

ComplexField digitize(const ComplexField& field, double dI) {
  check_sizes(field, "digitize");
  if (!std::isfinite(dI) || dI <= 0.0)
    throw std::invalid_argument("digitize: dI must be positive");
  ComplexField out = field;
  for (Eigen::Index j = 0; j < out.values.size(); ++j) {
    const double intensity = std::norm(out.values[j]);
    if (intensity == 0.0) continue;
    const double level = std::floor(intensity / dI + 0.5) * dI;
    out.values[j] *= std::sqrt(level / intensity);
  }
  return out;
}

KleinGordonState truncate(const KleinGordonState& state, double x_max) {
  if (state.phi.values.size() != state.phi.grid.n ||
      state.pi.values.size() != state.pi.grid.n ||
      !(state.phi.grid == state.pi.grid))
    throw std::invalid_argument("truncate: malformed scalar-field state");
  if (!std::isfinite(x_max) || x_max <= 0.0)
    throw std::invalid_argument("truncate: x_max must be positive");
  KleinGordonState out = state;
  const Grid1D& grid = out.phi.grid;
  if (x_max >= std::min(-grid.x_min, grid.x_max)) return out;
  for (Eigen::Index j = 0; j < grid.n; ++j)
    if (std::abs(grid.x(j)) >= x_max) {
      out.phi.values[j] = -1.0;
      out.pi.values[j] = 0.0;
    }
  return out;
}

}  // namespace rvlab
