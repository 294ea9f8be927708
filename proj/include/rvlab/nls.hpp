#pragma once

#include <vector>

#include "rvlab/errors.hpp"
#include "rvlab/field.hpp"

// Cubic-quintic NLS propagation:  i psi_z + Lap psi + |psi|^2 psi
// - eps |psi|^4 psi = 0,  as a Strang-split scheme.  The linear sub-flow is
// spectral on periodic grids and Crank-Nicolson on the finite-volume radial
// Laplacian on radial ones; the nonlinear sub-flow is an exact phase rotation.
// Backward propagation is always conjugate + forward solve + conjugate, so the
// discrete scheme inherits the continuous time-reversal symmetry exactly.

namespace rvlab {

struct NlsParams {
  double epsilon = 1e-3;
};

/// Step-size policy.  With adapt on, the step shrinks so the peak nonlinear
/// phase advance per step stays near cfl_like_factor (radians), never below
/// dz_min and never above dz.
struct StepControl {
  double dz = 1e-4;
  double dz_min = 1e-8;
  bool adapt = true;
  double cfl_like_factor = 0.02;
};

struct ConservedSample {
  double z = 0.0;
  double power = 0.0;
  double hamiltonian = 0.0;
  double peak_intensity = 0.0;
};

struct Trajectory {
  std::vector<ComplexField> snapshots;
  std::vector<ConservedSample> log;

  const ComplexField& initial_state() const { return snapshots.front(); }
  const ComplexField& final_state() const { return snapshots.back(); }
};

/// Marches psi0 forward to the absolute coordinate z_target, recording a
/// snapshot (with power, Hamiltonian, and peak intensity) every
/// snapshot_stride accepted steps plus the initial and final states.
/// Aborts with SolverAbort on NaN, on relative power drift above 1e-6, or on
/// a periodic-grid spectral tail (top 10% of |k|) growing past
/// max(1e-8, 10x its initial share) of the total power.
Trajectory propagate(const ComplexField& psi0, const NlsParams& params,
                     double z_target, const StepControl& ctrl = {},
                     int snapshot_stride = 50);

/// Propagates psi_out backward a distance z_back via the symmetry
/// z -> -z, psi -> conj(psi); snapshot coordinates count downward from
/// psi_out.z.
Trajectory reverse(const ComplexField& psi_out, const NlsParams& params,
                   double z_back, const StepControl& ctrl = {},
                   int snapshot_stride = 50);

/// H = int |grad psi|^2 - 1/2 |psi|^4 + (eps/3) |psi|^6.  The gradient term
/// uses the same discrete form each solver conserves exactly under its linear
/// sub-flow: sum k^2 |psi_hat|^2 dk on periodic grids, finite-volume face
/// differences on radial ones, so the logged drift isolates splitting error.
double hamiltonian(const ComplexField& psi, const NlsParams& params);

/// ||psi0||^2 / ||R_{kappa=1, eps=0}||^2 with the ground-state power taken on
/// psi0's own radial grid and quadrature.
double critical_power_ratio(const ComplexField& psi0_2d);

}  // namespace rvlab
