#include "rvlab/spectral.hpp"

#include <cmath>
#include <numbers>

namespace rvlab {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

const Grid1D& require_periodic(const ComplexField& field, const char* op) {
  const auto* g = std::get_if<Grid1D>(&field.grid);
  if (!g)
    throw std::invalid_argument(std::string(op) +
                                ": requires a periodic 1D grid");
  return *g;
}

Eigen::ArrayXcd fd_derivative_radial(const RadialGrid& g,
                                     const Eigen::ArrayXcd& v) {
  const Eigen::Index n = g.n;
  const double dr = g.dr();
  Eigen::ArrayXcd out(n);
  out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dr);
  for (Eigen::Index j = 1; j + 1 < n; ++j)
    out[j] = (v[j + 1] - v[j - 1]) / (2.0 * dr);
  out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dr);
  return out;
}

}  // namespace

Eigen::ArrayXd wavenumbers(const Grid1D& grid) {
  const double dk = 2.0 * kPi / grid.length();
  Eigen::ArrayXd k(grid.n);
  for (Eigen::Index m = 0; m < grid.n; ++m) {
    const Eigen::Index j = (m < grid.n / 2) ? m : m - grid.n;
    k[m] = static_cast<double>(j) * dk;
  }
  return k;
}

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

Spectrum forward_transform(const ComplexField& field) {
  const Grid1D& g = require_periodic(field, "forward_transform");
  Eigen::VectorXcd in = field.values.matrix();
  Eigen::VectorXcd out(g.n);
  fft_engine().fwd(out, in);
  const double scale = g.dx() / std::sqrt(2.0 * kPi);
  return Spectrum{g, out.array() * scale, field.z};
}

ComplexField inverse_transform(const Spectrum& spectrum) {
  const Grid1D& g = spectrum.grid;
  const double scale = std::sqrt(2.0 * kPi) / g.dx();
  Eigen::VectorXcd in = (spectrum.coeffs * scale).matrix();
  Eigen::VectorXcd out(g.n);
  fft_engine().inv(out, in);
  return ComplexField{Grid{g}, out.array(), spectrum.z};
}

ComplexField spectral_derivative(const ComplexField& field) {
  const Grid1D& g = require_periodic(field, "spectral_derivative");
  Spectrum s = forward_transform(field);
  const Eigen::ArrayXd k = wavenumbers(g);
  s.coeffs *= Complex(0.0, 1.0) * k.cast<Complex>();
  s.coeffs[g.n / 2] = 0.0;
  return inverse_transform(s);
}

ComplexField gradient(const ComplexField& field) {
  if (std::holds_alternative<Grid1D>(field.grid))
    return spectral_derivative(field);
  const auto& g = std::get<RadialGrid>(field.grid);
  return ComplexField{field.grid, fd_derivative_radial(g, field.values),
                      field.z};
}

Eigen::ArrayXd quadrature_weights(const Grid& grid) {
  const Eigen::Index n = sample_count(grid);
  Eigen::ArrayXd w(n);
  if (const auto* p = std::get_if<Grid1D>(&grid)) {
    w.setConstant(p->dx());
    return w;
  }
  const auto& g = std::get<RadialGrid>(grid);
  const double dr = g.dr();
  w[0] = 2.0 * kPi * dr * dr / 8.0;
  for (Eigen::Index j = 1; j < n; ++j) w[j] = 2.0 * kPi * g.r(j) * dr;
  return w;
}

double l2_norm_sq(const ComplexField& field) {
  return (quadrature_weights(field.grid) * field.values.abs2()).sum();
}

double l2_norm_sq(const RealField& field) {
  return field.grid.dx() * field.values.square().sum();
}

double h1_norm_sq(const ComplexField& field) {
  return l2_norm_sq(field) + l2_norm_sq(gradient(field));
}

double h1_norm_sq_restricted(const ComplexField& field,
                             const std::function<bool(double)>& region) {
  const ComplexField grad = gradient(field);
  const Eigen::ArrayXd w = quadrature_weights(field.grid);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < field.values.size(); ++j) {
    if (!region(coord(field.grid, j))) continue;
    acc += w[j] * (std::norm(field.values[j]) + std::norm(grad.values[j]));
  }
  return acc;
}

double h1_from_farfield(const Spectrum& spectrum) {
  double acc = 0.0;
  for (Eigen::Index m = 0; m < spectrum.coeffs.size(); ++m) {
    const double k = spectrum.wavenumber(m);
    acc += (1.0 + k * k) * std::norm(spectrum.coeffs[m]);
  }
  return acc * spectrum.dk();
}

}  // namespace rvlab
