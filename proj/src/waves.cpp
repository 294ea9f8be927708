#include "rvlab/waves.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "rvlab/spectral.hpp"

namespace rvlab {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;
constexpr double kSqrt2 = std::numbers::sqrt2_v<double>;

double sech(double x) { return 1.0 / std::cosh(x); }

// ---------------------------------------------------------------------------
// Radial shooting in scaled variables.
//
// With rho = sqrt(kappa) r and R = sqrt(kappa) u the radial equation becomes
//   u'' + u'/rho - u + u^3 - b u^5 = 0,   b = kappa * eps,
// so a single parameter family covers every (kappa, eps).  The ground state
// amplitude u(0) is found by bisection: too-large launches cross zero,
// too-small ones turn back up before decaying.
// ---------------------------------------------------------------------------

constexpr double kShotStep = 1e-3;
constexpr double kShotEnd = 25.0;
// Existence window of the scaled equation; at b = 3/16 the ground-state
// branch terminates.
constexpr double kQuinticBound2d = 3.0 / 16.0;

struct ScaledShot {
  double u0 = 0.0;
  double h = kShotStep;
  std::vector<double> u;     // profile samples at rho = m*h
  std::vector<double> du;    // first derivative there
  std::size_t trusted = 0;   // samples before roundoff takes over
  double tail_coeff = 0.0;   // matched  C e^{-rho}/sqrt(rho)  beyond that
};

double shot_rhs(double rho, double u, double s, double b) {
  const double f = u - u * u * u + b * std::pow(u, 5);
  if (rho == 0.0) return 0.5 * f;
  return f - s / rho;
}

// Fate of a launch amplitude.  Everything above the ground state counts as
// too_high: moderately high launches cross zero, and far above that the
// quintic term takes over and the trajectory diverges upward.  In both cases
// bisection must move down, so they share a label.
enum class ShotFate { too_low, too_high };

ShotFate classify_launch(double u0, double b) {
  double u = u0, s = 0.0;
  double rho = 0.0;
  const double h = kShotStep;
  while (rho < kShotEnd) {
    const double k1u = s;
    const double k1s = shot_rhs(rho, u, s, b);
    const double k2u = s + 0.5 * h * k1s;
    const double k2s = shot_rhs(rho + 0.5 * h, u + 0.5 * h * k1u, s + 0.5 * h * k1s, b);
    const double k3u = s + 0.5 * h * k2s;
    const double k3s = shot_rhs(rho + 0.5 * h, u + 0.5 * h * k2u, s + 0.5 * h * k2s, b);
    const double k4u = s + h * k3s;
    const double k4s = shot_rhs(rho + h, u + h * k3u, s + h * k3s, b);
    u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    s += (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    rho += h;
    if (u < 0.0) return ShotFate::too_high;
    // Turning up at small amplitude is the undershoot ring-down toward the
    // u = 1 plateau; turning up at large amplitude is quintic-driven blowup.
    if (s > 0.0) return u < 1.5 ? ShotFate::too_low : ShotFate::too_high;
  }
  // Decayed all the way without an event: close the bisection onto this side
  // from above.
  return ShotFate::too_low;
}

ScaledShot integrate_dense(double u0, double b) {
  ScaledShot shot;
  shot.u0 = u0;
  const double h = shot.h;
  const auto steps = static_cast<std::size_t>(std::lround(kShotEnd / h));
  shot.u.reserve(steps + 1);
  shot.du.reserve(steps + 1);
  double u = u0, s = 0.0, rho = 0.0;
  shot.u.push_back(u);
  shot.du.push_back(s);
  for (std::size_t m = 0; m < steps; ++m) {
    const double k1u = s;
    const double k1s = shot_rhs(rho, u, s, b);
    const double k2u = s + 0.5 * h * k1s;
    const double k2s = shot_rhs(rho + 0.5 * h, u + 0.5 * h * k1u, s + 0.5 * h * k1s, b);
    const double k3u = s + 0.5 * h * k2s;
    const double k3s = shot_rhs(rho + 0.5 * h, u + 0.5 * h * k2u, s + 0.5 * h * k2s, b);
    const double k4u = s + h * k3s;
    const double k4s = shot_rhs(rho + h, u + h * k3u, s + h * k3s, b);
    u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    s += (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    rho += h;
    shot.u.push_back(u);
    shot.du.push_back(s);
  }
  // The bisection residual and accumulated roundoff ride the growing mode
  // e^{+rho}; cut the profile where monotone decay breaks and graft the exact
  // far-field solution C K0(rho) of the linearised equation.
  shot.trusted = shot.u.size();
  for (std::size_t m = 1; m < shot.u.size(); ++m) {
    if (shot.u[m] <= 0.0 || shot.u[m] > shot.u[m - 1] ||
        shot.u[m] < 1e-12 * u0) {
      shot.trusted = m;
      break;
    }
  }
  const std::size_t last = shot.trusted - 1;
  const double rho_t = static_cast<double>(last) * h;
  shot.tail_coeff =
      rho_t > 1.0 ? shot.u[last] / std::cyl_bessel_k(0.0, rho_t) : 0.0;
  return shot;
}

ScaledShot solve_scaled(double b) {
  double lo = 0.3, hi = 8.0;
  if (classify_launch(lo, b) != ShotFate::too_low ||
      classify_launch(hi, b) != ShotFate::too_high)
    throw BracketError("radial shooting: amplitude bracket [0.3, 8] does not "
                       "straddle the ground state");
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (classify_launch(mid, b) == ShotFate::too_high)
      hi = mid;
    else
      lo = mid;
  }
  return integrate_dense(0.5 * (lo + hi), b);
}

const ScaledShot& shot_for(double b) {
  static std::mutex mu;
  static std::map<double, ScaledShot> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(b);
  if (it == cache.end()) it = cache.emplace(b, solve_scaled(b)).first;
  return it->second;
}

double shot_value(const ScaledShot& shot, double rho) {
  const double h = shot.h;
  const double trust_end = static_cast<double>(shot.trusted - 1) * h;
  if (rho >= trust_end) {
    if (shot.tail_coeff == 0.0 || rho > 690.0) return 0.0;
    return shot.tail_coeff * std::cyl_bessel_k(0.0, rho);
  }
  const auto m = static_cast<std::size_t>(rho / h);
  const double s = rho / h - static_cast<double>(m);
  const double u0 = shot.u[m], u1 = shot.u[m + 1];
  const double d0 = shot.du[m] * h, d1 = shot.du[m + 1] * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * u0 + (s3 - 2.0 * s2 + s) * d0 +
         (-2.0 * s3 + 3.0 * s2) * u1 + (s3 - s2) * d1;
}

double bisect_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, const char* what) {
  if (f(lo) > target || f(hi) < target)
    throw BracketError(std::string(what) + ": target outside bracket");
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// The 2D peak amplitude sqrt(kappa) u_b(0) is not monotone in kappa at fixed
// eps > 0: it rises, tops out, and falls toward the flat-top value at the
// existence edge.  fit_kappa_2d inverts the rising branch, so locate the
// turning point once per eps (golden-section on the unimodal map).
double amplitude_peak_kappa_2d(double eps) {
  static std::mutex mu;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(eps);
    if (it != cache.end()) return it->second;
  }
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 1.0, b = 0.9999 * kQuinticBound2d / eps;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = cq_solitary_amplitude_2d(x1, eps);
  double f2 = cq_solitary_amplitude_2d(x2, eps);
  while (b - a > 1e-3 * b) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = cq_solitary_amplitude_2d(x2, eps);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = cq_solitary_amplitude_2d(x1, eps);
    }
  }
  const double peak = 0.5 * (a + b);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(eps, peak);
  return peak;
}

}  // namespace

double kappa_limit_1d(double eps) {
  if (eps < 0.0) throw std::invalid_argument("kappa_limit_1d: eps must be >= 0");
  if (eps == 0.0) return std::numeric_limits<double>::infinity();
  return 3.0 / (16.0 * eps);
}

double cq_solitary_value_1d(double kappa, double eps, double x) {
  if (kappa <= 0.0) throw std::invalid_argument("cq_solitary_value_1d: kappa must be > 0");
  const double disc = 1.0 - (16.0 / 3.0) * kappa * eps;
  if (disc < 0.0)
    throw std::invalid_argument("cq_solitary_value_1d: kappa beyond the existence limit");
  const double a = std::sqrt(disc);
  const double root_k = std::sqrt(kappa);
  const double w = 2.0 * root_k * std::abs(x);
  if (w > 700.0) {
    // cosh would overflow; use its exponential asymptote
    const double amp = 2.0 * root_k * std::sqrt(2.0 / a);
    return amp * std::exp(-0.5 * w);
  }
  return 2.0 * root_k / std::sqrt(1.0 + a * std::cosh(w));
}

double cq_solitary_amplitude_1d(double kappa, double eps) {
  return cq_solitary_value_1d(kappa, eps, 0.0);
}

ComplexField cq_solitary_1d(const Grid1D& grid, double kappa, double eps,
                            double x0) {
  return sample(grid, [&](double x) {
    return Complex(cq_solitary_value_1d(kappa, eps, x - x0), 0.0);
  });
}

ComplexField fusion_ic(const Grid1D& grid, double kappa, double eps, double x0,
                       double theta) {
  const double margin =
      std::min(grid.x_max - std::abs(x0), -grid.x_min - std::abs(x0));
  if (margin <= 0.0 || cq_solitary_value_1d(kappa, eps, margin) >= 1e-12)
    throw std::invalid_argument(
        "fusion_ic: grid too narrow, beam tails do not clear 1e-12 at the edge");
  return sample(grid, [&](double x) {
    const double rp = cq_solitary_value_1d(kappa, eps, x - x0);
    const double rm = cq_solitary_value_1d(kappa, eps, x + x0);
    return std::polar(rp, -theta * x) + std::polar(rm, theta * x);
  });
}

ComplexField cq_solitary_2d(const RadialGrid& grid, double kappa, double eps) {
  if (kappa <= 0.0) throw std::invalid_argument("cq_solitary_2d: kappa must be > 0");
  const double b = kappa * eps;
  if (b >= kQuinticBound2d)
    throw std::invalid_argument("cq_solitary_2d: kappa*eps beyond the existence window");
  const ScaledShot& shot = shot_for(b);
  const double root_k = std::sqrt(kappa);
  ComplexField out{Grid{grid}, Eigen::ArrayXcd(grid.n), 0.0};
  for (Eigen::Index j = 0; j < grid.n; ++j)
    out.values[j] = Complex(root_k * shot_value(shot, root_k * grid.r(j)), 0.0);
  return out;
}

double cq_solitary_amplitude_2d(double kappa, double eps) {
  if (kappa <= 0.0) throw std::invalid_argument("cq_solitary_amplitude_2d: kappa must be > 0");
  const double b = kappa * eps;
  if (b >= kQuinticBound2d)
    throw std::invalid_argument("cq_solitary_amplitude_2d: kappa*eps beyond the existence window");
  return std::sqrt(kappa) * shot_for(b).u0;
}

ComplexField gaussian_ic(const RadialGrid& grid, double amplitude) {
  return sample(grid, [&](double r) {
    return Complex(amplitude * std::exp(-r * r), 0.0);
  });
}

double kink_value(double x, double x0, double v, double t) {
  if (!(std::abs(v) < 1.0))
    throw std::invalid_argument("kink_value: |v| must be < 1");
  const double gamma_inv = std::sqrt(1.0 - v * v);
  const double xi = (x - x0 - v * t) / gamma_inv;
  return std::tanh(xi / kSqrt2);
}

KleinGordonState kink_antikink_ic(const Grid1D& grid, double v, double x0) {
  if (!(std::abs(v) < 1.0))
    throw std::invalid_argument("kink_antikink_ic: |v| must be < 1");
  if (!(x0 > 0.0))
    throw std::invalid_argument("kink_antikink_ic: x0 must be positive");
  const double s = std::sqrt(1.0 - v * v);
  RealField phi = sample(grid, [&](double x) {
    return std::tanh((x + x0) / (s * kSqrt2)) -
           std::tanh((x - x0) / (s * kSqrt2)) - 1.0;
  });
  RealField pi = sample(grid, [&](double x) {
    const double a = sech((x + x0) / (s * kSqrt2));
    const double b = sech((x - x0) / (s * kSqrt2));
    return -(v / (kSqrt2 * s)) * (a * a + b * b);
  });
  return KleinGordonState{std::move(phi), std::move(pi)};
}

ComplexField explicit_blowup(const RadialGrid& grid, double t_c, double t) {
  if (!(t < t_c))
    throw std::invalid_argument("explicit_blowup: requires t < t_c");
  const double s = t_c - t;
  const double zeta = t / (t_c * s);
  const ScaledShot& townes = shot_for(0.0);
  ComplexField out{Grid{grid}, Eigen::ArrayXcd(grid.n), t};
  for (Eigen::Index j = 0; j < grid.n; ++j) {
    const double r = grid.r(j);
    const double amp = shot_value(townes, r / s) / s;
    out.values[j] = std::polar(amp, zeta - r * r / (4.0 * s));
  }
  return out;
}

ComplexField galilean(const ComplexField& field, double c) {
  const auto* g = std::get_if<Grid1D>(&field.grid);
  if (!g) throw std::invalid_argument("galilean: requires a periodic 1D field");
  const double z = field.z;
  Spectrum spec = forward_transform(field);
  const Eigen::ArrayXd k = wavenumbers(*g);
  for (Eigen::Index m = 0; m < spec.coeffs.size(); ++m)
    spec.coeffs[m] *= std::polar(1.0, -k[m] * c * z);
  ComplexField shifted = inverse_transform(spec);
  for (Eigen::Index j = 0; j < g->n; ++j)
    shifted.values[j] *= std::polar(1.0, 0.5 * c * g->x(j) - 0.25 * c * c * z);
  return shifted;
}

namespace {

double refined_peak(const ComplexField& field) {
  const Eigen::ArrayXd mag = field.values.abs();
  Eigen::Index jmax = 0;
  mag.maxCoeff(&jmax);
  const Eigen::Index n = mag.size();
  const bool periodic = std::holds_alternative<Grid1D>(field.grid);
  if (!periodic && (jmax == 0 || jmax == n - 1)) return mag[jmax];
  const double ym = mag[(jmax - 1 + n) % n];
  const double y0 = mag[jmax];
  const double yp = mag[(jmax + 1) % n];
  const double denom = ym + yp - 2.0 * y0;
  if (denom >= 0.0) return y0;
  return y0 - (ym - yp) * (ym - yp) / (8.0 * denom);
}

}  // namespace

double fit_kappa_1d(double peak_amplitude, double eps) {
  if (!(peak_amplitude > 0.0))
    throw std::invalid_argument("fit_kappa_1d: peak amplitude must be positive");
  const double hi = eps > 0.0 ? kappa_limit_1d(eps)
                              : std::max(1.0, peak_amplitude * peak_amplitude);
  return bisect_increasing(
      [&](double kappa) { return cq_solitary_amplitude_1d(kappa, eps); },
      peak_amplitude, 1e-12, hi, "fit_kappa_1d");
}

double fit_kappa_2d(double peak_amplitude, double eps) {
  if (!(peak_amplitude > 0.0))
    throw std::invalid_argument("fit_kappa_2d: peak amplitude must be positive");
  const double hi =
      eps > 0.0 ? amplitude_peak_kappa_2d(eps)
                : std::max(1.0, 1.1 * std::pow(peak_amplitude / 2.2, 2.0));
  return bisect_increasing(
      [&](double kappa) { return cq_solitary_amplitude_2d(kappa, eps); },
      peak_amplitude, 1e-6, hi, "fit_kappa_2d");
}

double fit_kappa(const ComplexField& field, double eps) {
  const double peak = refined_peak(field);
  if (std::holds_alternative<Grid1D>(field.grid))
    return fit_kappa_1d(peak, eps);
  return fit_kappa_2d(peak, eps);
}

}  // namespace rvlab
