#pragma once

#include <unsupported/Eigen/FFT>

#include <functional>
#include <numbers>

#include "rvlab/field.hpp"

// Fourier transforms with a unitary normalization (Parseval holds with no
// extra factors), spectral derivatives, and the L2/H1 quadratures used by the
// diagnostics.  Periodic fields use exact spectral machinery; radial fields
// use second-order finite differences and a finite-volume quadrature whose
// weights match the radial solver's conserved power.

namespace rvlab {

/// Fourier coefficients of a periodic field.  coeffs[m] multiplies
/// exp(i k x) with k = wavenumber(m); modes are stored in DFT order
/// (m < n/2 maps to k = m*dk, m >= n/2 to k = (m - n)*dk, dk = 2*pi/L).
/// Normalization is unitary: sum |coeffs|^2 * dk == sum |psi|^2 * dx.
struct Spectrum {
  Grid1D grid;
  Eigen::ArrayXcd coeffs;
  double z = 0.0;

  double dk() const { return 2.0 * std::numbers::pi_v<double> / grid.length(); }
  double wavenumber(Eigen::Index m) const {
    const Eigen::Index j = (m < grid.n / 2) ? m : m - grid.n;
    return static_cast<double>(j) * dk();
  }
};

/// Wavenumbers of every DFT mode, in DFT order.
Eigen::ArrayXd wavenumbers(const Grid1D& grid);

/// Per-thread FFT engine; plans are cached per transform size inside.
Eigen::FFT<double>& fft_engine();

Spectrum forward_transform(const ComplexField& field);
ComplexField inverse_transform(const Spectrum& spectrum);

/// d/dx via multiplication by ik; the unmatched Nyquist mode is zeroed.
ComplexField spectral_derivative(const ComplexField& field);

/// First derivative on either grid kind: spectral for periodic fields,
/// second-order finite differences (one-sided at the ends) for radial ones.
ComplexField gradient(const ComplexField& field);

/// Integral of |f|^2: dx * sum on periodic grids; the finite-volume radial
/// quadrature 2*pi * sum V_j |f_j|^2 with V_0 = dr^2/8, V_j = r_j * dr on
/// radial ones.
double l2_norm_sq(const ComplexField& field);
double l2_norm_sq(const RealField& field);

/// Quadrature weight of sample j under the radial rule above (times 2*pi),
/// or plain dx on periodic grids.  Exposed so other modules integrate with
/// the exact same rule.
Eigen::ArrayXd quadrature_weights(const Grid& grid);

/// ||f||^2 + ||f'||^2 with the gradient from gradient().
double h1_norm_sq(const ComplexField& field);

/// Same integrand restricted to samples whose coordinate satisfies the
/// region predicate.  The gradient is computed on the full field first and
/// restricted afterwards.
double h1_norm_sq_restricted(const ComplexField& field,
                             const std::function<bool(double)>& region);

/// H1 norm squared evaluated from far-field data alone:
/// sum (1 + k^2) |coeffs|^2 * dk.
double h1_from_farfield(const Spectrum& spectrum);

}  // namespace rvlab
