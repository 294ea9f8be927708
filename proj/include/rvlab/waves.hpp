#pragma once

#include "rvlab/errors.hpp"
#include "rvlab/field.hpp"

// Closed-form and shot reference solutions: cubic-quintic solitary profiles,
// phi^4 kinks, the exact self-similar collapse solution, and the Galilean
// boost.  These are both initial-condition builders and the analytic oracles
// the solvers are tested against.

namespace rvlab {

/// Largest kappa for which the 1D cubic-quintic solitary wave exists at this
/// quintic coefficient (the square root in the profile hits zero there).
double kappa_limit_1d(double eps);

/// R(x) = 2 sqrt(kappa) / sqrt(1 + sqrt(1 - (16/3) kappa eps) cosh(2 sqrt(kappa) x)),
/// the exact solution of  -kappa R + R'' + R^3 - eps R^5 = 0  that decays at
/// infinity.  For eps = 0 this reduces to sqrt(2 kappa) sech(sqrt(kappa) x).
double cq_solitary_value_1d(double kappa, double eps, double x);

/// Peak amplitude R(0) of the profile above; strictly increasing in kappa.
double cq_solitary_amplitude_1d(double kappa, double eps);

/// Solitary profile sampled on a periodic grid, centered at x0.
ComplexField cq_solitary_1d(const Grid1D& grid, double kappa, double eps,
                            double x0 = 0.0);

/// Two counter-propagating solitary beams,
///   exp(-i theta x) R(x - x0) + exp(+i theta x) R(x + x0).
/// Requires the grid wide enough that R at the edges is below 1e-12.
ComplexField fusion_ic(const Grid1D& grid, double kappa, double eps, double x0,
                       double theta);

/// Ground state of  -kappa R + R'' + R'/r + R^3 - eps R^5 = 0  with
/// R'(0) = 0 and decay at infinity, found by bisection shooting on R(0).
ComplexField cq_solitary_2d(const RadialGrid& grid, double kappa, double eps);

/// Peak amplitude R(0) of the radial ground state; strictly increasing in
/// kappa at fixed eps.
double cq_solitary_amplitude_2d(double kappa, double eps);

/// Collimated Gaussian input beam  a * exp(-r^2).
ComplexField gaussian_ic(const RadialGrid& grid, double amplitude);

/// Boosted phi^4 kink  tanh(xi / sqrt(2)),  xi = (x - x0 - v t)/sqrt(1 - v^2).
double kink_value(double x, double x0, double v, double t);

struct KleinGordonState {
  RealField phi;
  RealField pi;
};

/// Kink at -x0 moving right with speed v and antikink at +x0 moving left,
/// on the common -1 vacuum:  phi = K(x + x0) - K(x - x0) - 1 at t = 0.
KleinGordonState kink_antikink_ic(const Grid1D& grid, double v, double x0);

/// Exact self-similar blowup solution of the 2D cubic equation at time t:
///   (1/(t_c - t)) R(r/(t_c - t)) exp(i (zeta - r^2/(4 (t_c - t)))),
/// zeta = t / (t_c (t_c - t)), with R the cubic radial ground state.
ComplexField explicit_blowup(const RadialGrid& grid, double t_c, double t);

/// Galilean boost F_c: psi(z, x - c z) exp(i (c x / 2 - c^2 z / 4)).
/// The translation is spectral (exact for band-limited periodic fields).
ComplexField galilean(const ComplexField& field, double c);

/// Inverts the solitary peak-amplitude map for kappa by bisection; dispatches
/// on the grid kind of the field whose peak is being matched.
double fit_kappa(const ComplexField& field, double eps);

double fit_kappa_1d(double peak_amplitude, double eps);
double fit_kappa_2d(double peak_amplitude, double eps);

}  // namespace rvlab
