#pragma once

#include <optional>
#include <string>

#include "rvlab/field.hpp"
#include "rvlab/perturb.hpp"
#include "rvlab/waves.hpp"

// Error indicators comparing an output field with its perturbed copy.  They
// quantify how much a detector imperfection removed; they never gate solver
// behavior.

namespace rvlab {

/// Indicator bundle for one perturbed output.  Optional entries are left
/// unset when the indicator is not defined for the perturbation (a hard jump
/// leaves the differentiable class, a pointwise operator has no tail region);
/// notes says which variants applied and why.
struct MetricReport {
  double delta_p = 0.0;
  std::optional<double> delta_h1;
  std::optional<double> delta_h1_tilde;
  std::optional<double> delta_h_rel;
  std::string notes;
};

/// Relative removed power ||psi - psi_per||_2^2 / ||psi||_2^2.
double delta_p(const ComplexField& psi, const ComplexField& psi_per);

/// Relative removed Sobolev content ||psi - psi_per||_H1^2 / ||psi||_H1^2,
/// evaluated with the spectral gradient.  Meaningful only when psi_per has
/// no hard jumps; callers use delta_h1_tilde otherwise.
double delta_h1(const ComplexField& psi, const ComplexField& psi_per);

/// Tail fraction ||psi||_H1(region)^2 / ||psi||_H1^2 of the unperturbed
/// output, the jump-free stand-in for delta_h1.  The region and prefactor
/// follow the perturbation: |x| >= x_max for truncate (factor 1),
/// phase_flip_tail (factor |1-(-1)|^2 = 4) and scale_tail (factor
/// |1-beta|^2); the band complement |x| outside [x_b, x_b+width] for block.
double delta_h1_tilde(const ComplexField& psi, const PerturbationSpec& spec);

/// Signed relative energy change (H(phi_per) - H(phi)) / H(phi) of a
/// scalar-field state.
double delta_h_rel(const KleinGordonState& phi, const KleinGordonState& phi_per);

/// Applies the applicability table: delta_p always; delta_h1 for bandlimit
/// and (annotated, despite the jumps) block; delta_h1_tilde for the four
/// tail/band operators; delta_h_rel never (it belongs to the scalar-field
/// pipeline).
MetricReport measure(const ComplexField& psi, const ComplexField& psi_per,
                     const PerturbationSpec& spec);

}  // namespace rvlab
