#pragma once

#include <string>

#include "rvlab/field.hpp"
#include "rvlab/waves.hpp"

// Detector-imperfection operators applied to an output field before it is
// conjugated and propagated back.  Each one touches only the region its
// parameters name and leaves every other sample bit-identical (digitize is
// the exception: it acts pointwise everywhere).

namespace rvlab {

enum class PerturbationKind {
  truncate,
  bandlimit,
  phase_flip_tail,
  scale_tail,
  block,
  digitize,
};

const char* to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from(const std::string& name);

/// One serializable perturbation.  `param` is the leading parameter of the
/// operator (x_max, k_max, x_b, or dI); `beta` is read by scale_tail only and
/// `width` by block only.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::truncate;
  double param = 0.0;
  double beta = 0.0;
  double width = 1.0;
};

ComplexField apply(const ComplexField& field, const PerturbationSpec& spec);

/// Zeroes every sample with |x| >= x_max (r >= x_max on radial grids),
/// modelling a detector of finite radius.  x_max at or beyond the domain
/// half-width is the identity.
ComplexField truncate(const ComplexField& field, double x_max);

/// Finite-radius detector with a piecewise-linear roll-off instead of a hard
/// cut: weight 1 up to x_max, falling linearly to 0 at x_max + ramp_width.
ComplexField truncate_soft(const ComplexField& field, double x_max,
                           double ramp_width);

/// Zeroes every spectral coefficient with |k| > k_max, modelling a detector
/// that resolves a band-limited range of spatial frequencies.  Periodic 1D
/// fields only.  k_max at or beyond Nyquist is the identity.
ComplexField bandlimit(const ComplexField& field, double k_max);

/// Multiplies samples with |x| >= x_max by -1: the tail re-enters with a pi
/// phase mismatch.  An involution.
ComplexField phase_flip_tail(const ComplexField& field, double x_max);

/// Multiplies samples with |x| >= x_max by beta (real): attenuated or
/// amplified tail with no phase mismatch.  beta = 0 equals truncate.
ComplexField scale_tail(const ComplexField& field, double x_max, double beta);

/// Zeroes samples with x_b < |x| < x_b + width: an opaque annulus that lets
/// the tail beyond it through.
ComplexField block(const ComplexField& field, double x_b, double width = 1.0);

/// Projects each sample's intensity |psi|^2 onto the nearest multiple of dI
/// (half rounds up), keeping the phase exactly.
ComplexField digitize(const ComplexField& field, double dI);

/// Finite detector for the scalar-field collisions: phi is replaced by the
/// -1 vacuum and pi by 0 wherever |x| >= x_max.
KleinGordonState truncate(const KleinGordonState& state, double x_max);

}  // namespace rvlab
