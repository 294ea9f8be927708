#include "rvlab/nls.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <variant>

#include "rvlab/spectral.hpp"
#include "rvlab/waves.hpp"

namespace rvlab {

namespace {

constexpr double kPowerDriftTol = 1e-6;
constexpr double kTailAbsTol = 1e-8;
constexpr double kTailGrowthFactor = 10.0;

void rotate_nonlinear(Eigen::ArrayXcd& v, double eps, double dz) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double ii = std::norm(v[j]);
    v[j] *= std::polar(1.0, (ii - eps * ii * ii) * dz);
  }
}

/// Share of spectral power carried by the top decade of |k|.
double tail_fraction(const Spectrum& spec) {
  const Eigen::Index n = spec.coeffs.size();
  const double edge = 0.9 * static_cast<double>(n / 2) * spec.dk();
  double total = 0.0, tail = 0.0;
  for (Eigen::Index m = 0; m < n; ++m) {
    const double p = std::norm(spec.coeffs[m]);
    total += p;
    if (std::abs(spec.wavenumber(m)) >= edge) tail += p;
  }
  return total > 0.0 ? tail / total : 0.0;
}

/// Adaptive steps are the base step halved until the peak nonlinear phase
/// advance fits under cfl_like_factor, so the step takes only a few discrete
/// values per run and per-step phase tables can be reused.
double pick_step(const StepControl& ctrl, double peak_intensity,
                 double remaining) {
  double dz = ctrl.dz;
  if (ctrl.adapt && peak_intensity > 0.0) {
    const double want =
        std::max(ctrl.cfl_like_factor / peak_intensity, ctrl.dz_min);
    while (dz > want * (1.0 + 1e-12) && dz * 0.5 >= ctrl.dz_min) dz *= 0.5;
  }
  return std::min(dz, remaining);
}

class PeriodicStepper {
 public:
  PeriodicStepper(const Grid1D& grid, double eps)
      : grid_(grid), eps_(eps), k2_(wavenumbers(grid).square()) {}

  void step(Eigen::ArrayXcd& v, double dz) {
    rotate_nonlinear(v, eps_, 0.5 * dz);
    ComplexField tmp{Grid{grid_}, std::move(v), 0.0};
    Spectrum spec = forward_transform(tmp);
    const Eigen::ArrayXcd& phase = linear_phase(dz);
    spec.coeffs *= phase;
    v = inverse_transform(spec).values;
    rotate_nonlinear(v, eps_, 0.5 * dz);
  }

  double power(const Eigen::ArrayXcd& v) const {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) sum += std::norm(v[j]);
    return sum * grid_.dx();
  }

 private:
  const Eigen::ArrayXcd& linear_phase(double dz) {
    auto it = phases_.find(dz);
    if (it == phases_.end()) {
      Eigen::ArrayXcd p(k2_.size());
      for (Eigen::Index m = 0; m < k2_.size(); ++m)
        p[m] = std::polar(1.0, -k2_[m] * dz);
      it = phases_.emplace(dz, std::move(p)).first;
    }
    return it->second;
  }

  Grid1D grid_;
  double eps_;
  Eigen::ArrayXd k2_;
  std::map<double, Eigen::ArrayXcd> phases_;
};

class RadialStepper {
 public:
  RadialStepper(const RadialGrid& grid, double eps)
      : grid_(grid), eps_(eps), fl_(grid.n), fr_(grid.n), weights_(grid.n) {
    const double dr = grid.dr();
    for (Eigen::Index j = 0; j < grid.n; ++j) {
      const double vol = (j == 0) ? dr * dr / 8.0 : grid.r(j) * dr;
      fl_[j] = (j == 0) ? 0.0 : (grid.r(j) - 0.5 * dr) / (dr * vol);
      fr_[j] = (grid.r(j) + 0.5 * dr) / (dr * vol);
      weights_[j] = 2.0 * std::numbers::pi_v<double> * vol;
    }
  }

  void step(Eigen::ArrayXcd& v, double dz) {
    rotate_nonlinear(v, eps_, 0.5 * dz);
    crank_nicolson(v, dz);
    rotate_nonlinear(v, eps_, 0.5 * dz);
  }

  double power(const Eigen::ArrayXcd& v) const {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j)
      sum += weights_[j] * std::norm(v[j]);
    return sum;
  }

 private:
  struct Factors {
    Complex s;
    Eigen::ArrayXcd cp;     // eliminated upper diagonal
    Eigen::ArrayXcd inv_m;  // reciprocal pivots
  };

  // One Cayley step (1 - s A) v' = (1 + s A) v with s = i dz/2 and A the
  // finite-volume radial Laplacian (Dirichlet ghost at r_max).  A is
  // self-adjoint in the volume-weighted inner product, so the map is unitary
  // in the solver's power quadrature.
  void crank_nicolson(Eigen::ArrayXcd& v, double dz) {
    const Factors& f = factors(dz);
    const Eigen::Index n = v.size();
    rhs_.resize(n);
    const Complex s = f.s;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex left = (j == 0) ? Complex(0.0) : v[j - 1];
      const Complex right = (j == n - 1) ? Complex(0.0) : v[j + 1];
      rhs_[j] = v[j] + s * (fl_[j] * left - (fl_[j] + fr_[j]) * v[j] +
                            fr_[j] * right);
    }
    v[0] = rhs_[0] * f.inv_m[0];
    for (Eigen::Index j = 1; j < n; ++j)
      v[j] = (rhs_[j] + s * fl_[j] * v[j - 1]) * f.inv_m[j];
    for (Eigen::Index j = n - 2; j >= 0; --j) v[j] -= f.cp[j] * v[j + 1];
  }

  const Factors& factors(double dz) {
    auto it = factors_.find(dz);
    if (it != factors_.end()) return it->second;
    Factors f;
    f.s = Complex(0.0, 0.5 * dz);
    const Eigen::Index n = grid_.n;
    f.cp.resize(n);
    f.inv_m.resize(n);
    Complex m = Complex(1.0) + f.s * (fl_[0] + fr_[0]);
    f.inv_m[0] = 1.0 / m;
    f.cp[0] = -f.s * fr_[0] * f.inv_m[0];
    for (Eigen::Index j = 1; j < n; ++j) {
      m = Complex(1.0) + f.s * (fl_[j] + fr_[j]) + f.s * fl_[j] * f.cp[j - 1];
      f.inv_m[j] = 1.0 / m;
      f.cp[j] = -f.s * fr_[j] * f.inv_m[j];
    }
    return factors_.emplace(dz, std::move(f)).first->second;
  }

  RadialGrid grid_;
  double eps_;
  Eigen::ArrayXd fl_, fr_, weights_;
  Eigen::ArrayXcd rhs_;
  std::map<double, Factors> factors_;
};

double hamiltonian_impl(const ComplexField& psi, double eps) {
  double grad = 0.0;
  if (const auto* g = std::get_if<Grid1D>(&psi.grid)) {
    const Spectrum spec = forward_transform(psi);
    const Eigen::ArrayXd k = wavenumbers(*g);
    for (Eigen::Index m = 0; m < k.size(); ++m)
      grad += k[m] * k[m] * std::norm(spec.coeffs[m]);
    grad *= spec.dk();
  } else {
    const auto& rg = std::get<RadialGrid>(psi.grid);
    const double dr = rg.dr();
    double faces = 0.0;
    for (Eigen::Index j = 0; j < rg.n; ++j) {
      const Complex upper = (j == rg.n - 1) ? Complex(0.0) : psi.values[j + 1];
      faces += (rg.r(j) + 0.5 * dr) * std::norm(upper - psi.values[j]);
    }
    grad = 2.0 * std::numbers::pi_v<double> * faces / dr;
  }
  const Eigen::ArrayXd w = quadrature_weights(psi.grid);
  double quartic = 0.0, sextic = 0.0;
  for (Eigen::Index j = 0; j < psi.values.size(); ++j) {
    const double ii = std::norm(psi.values[j]);
    quartic += w[j] * ii * ii;
    sextic += w[j] * ii * ii * ii;
  }
  return grad - 0.5 * quartic + (eps / 3.0) * sextic;
}

}  // namespace

Trajectory propagate(const ComplexField& psi0, const NlsParams& params,
                     double z_target, const StepControl& ctrl,
                     int snapshot_stride) {
  if (!(ctrl.dz_min > 0.0) || !(ctrl.dz_min <= ctrl.dz))
    throw std::invalid_argument("propagate: require 0 < dz_min <= dz");
  if (snapshot_stride < 1)
    throw std::invalid_argument("propagate: snapshot_stride must be >= 1");
  if (!(z_target > psi0.z))
    throw std::invalid_argument("propagate: z_target must exceed psi0.z");
  if (params.epsilon < 0.0)
    throw std::invalid_argument("propagate: epsilon must be >= 0");

  const bool periodic = std::holds_alternative<Grid1D>(psi0.grid);
  std::variant<std::monostate, PeriodicStepper, RadialStepper> stepper;
  if (periodic)
    stepper.emplace<PeriodicStepper>(std::get<Grid1D>(psi0.grid),
                                     params.epsilon);
  else
    stepper.emplace<RadialStepper>(std::get<RadialGrid>(psi0.grid),
                                   params.epsilon);
  auto step = [&](Eigen::ArrayXcd& v, double dz) {
    if (periodic)
      std::get<PeriodicStepper>(stepper).step(v, dz);
    else
      std::get<RadialStepper>(stepper).step(v, dz);
  };
  auto power_of = [&](const Eigen::ArrayXcd& v) {
    return periodic ? std::get<PeriodicStepper>(stepper).power(v)
                    : std::get<RadialStepper>(stepper).power(v);
  };

  Trajectory traj;
  Eigen::ArrayXcd v = psi0.values;
  double z = psi0.z;
  const double initial_power = power_of(v);
  if (!std::isfinite(initial_power) || initial_power <= 0.0)
    throw std::invalid_argument("propagate: input power is not finite and positive");

  double tail_threshold = 0.0;
  if (periodic) {
    const double tail0 = tail_fraction(forward_transform(psi0));
    tail_threshold = std::max(kTailAbsTol, kTailGrowthFactor * tail0);
  }

  auto record = [&](double z_now) {
    ComplexField snap{psi0.grid, v, z_now};
    const double peak = v.abs2().maxCoeff();
    traj.log.push_back(ConservedSample{z_now, power_of(v),
                                       hamiltonian_impl(snap, params.epsilon),
                                       peak});
    if (periodic) {
      const double tail = tail_fraction(forward_transform(snap));
      if (tail > tail_threshold)
        throw SolverAbort(
            "propagate: spectral tail fraction " + std::to_string(tail) +
                " exceeds resolution guard " + std::to_string(tail_threshold),
            z_now);
    }
    traj.snapshots.push_back(std::move(snap));
  };

  record(z);
  long steps = 0;
  while (z_target - z > 1e-14 * std::max(1.0, std::abs(z_target))) {
    const double peak = v.abs2().maxCoeff();
    const double dz = pick_step(ctrl, peak, z_target - z);
    step(v, dz);
    z += dz;
    ++steps;
    const double p = power_of(v);
    if (!std::isfinite(p))
      throw SolverAbort("propagate: non-finite field", z);
    if (std::abs(p - initial_power) > kPowerDriftTol * initial_power)
      throw SolverAbort("propagate: relative power drift " +
                            std::to_string((p - initial_power) / initial_power),
                        z);
    const bool last = !(z_target - z > 1e-14 * std::max(1.0, std::abs(z_target)));
    if (last)
      z = z_target;
    if (last || steps % snapshot_stride == 0) record(z);
  }
  return traj;
}

Trajectory reverse(const ComplexField& psi_out, const NlsParams& params,
                   double z_back, const StepControl& ctrl,
                   int snapshot_stride) {
  if (!(z_back > 0.0))
    throw std::invalid_argument("reverse: z_back must be positive");
  const double z0 = psi_out.z;
  ComplexField conj_in{psi_out.grid, psi_out.values.conjugate(), z0};
  Trajectory fwd;
  try {
    fwd = propagate(conj_in, params, z0 + z_back, ctrl, snapshot_stride);
  } catch (const SolverAbort& abort) {
    throw SolverAbort(abort.what(), 2.0 * z0 - abort.z);
  }
  for (ComplexField& snap : fwd.snapshots) {
    snap.values = snap.values.conjugate().eval();
    snap.z = 2.0 * z0 - snap.z;
  }
  for (ConservedSample& row : fwd.log) row.z = 2.0 * z0 - row.z;
  return fwd;
}

double hamiltonian(const ComplexField& psi, const NlsParams& params) {
  return hamiltonian_impl(psi, params.epsilon);
}

double critical_power_ratio(const ComplexField& psi0_2d) {
  const auto* rg = std::get_if<RadialGrid>(&psi0_2d.grid);
  if (!rg)
    throw std::invalid_argument("critical_power_ratio: requires a radial field");
  const ComplexField ground = cq_solitary_2d(*rg, 1.0, 0.0);
  return l2_norm_sq(psi0_2d) / l2_norm_sq(ground);
}

}  // namespace rvlab
