#include "rvlab/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_shock(const Breakpoint& b) { return b.u_left > b.u_right; }
bool is_fan(const Breakpoint& b) { return b.u_left < b.u_right; }

void validate(const PiecewiseProfile& p, const char* who) {
  if (p.points.empty())
    throw std::invalid_argument(std::string(who) + ": profile has no breakpoints");
  double prev = -kInf;
  for (const Breakpoint& b : p.points) {
    if (!std::isfinite(b.x) || !std::isfinite(b.u_left) ||
        !std::isfinite(b.u_right))
      throw std::invalid_argument(std::string(who) +
                                  ": breakpoint entries must be finite");
    if (!(b.x > prev))
      throw std::invalid_argument(
          std::string(who) + ": breakpoint positions must increase strictly");
    prev = b.x;
  }
}

// Affine data u0(x) = a + b*x on one segment.  Characteristics keep it
// affine: u(x, dt) = (a + b*x) / (1 + b*dt) until the segment collapses at
// dt = -1/b (b < 0) or is consumed by a neighbouring discontinuity.
struct Segment {
  double a = 0.0;
  double b = 0.0;
  double at(double x, double dt) const { return (a + b * x) / (1.0 + b * dt); }
};

// seg[i] is the segment left of node i; seg[points.size()] the right constant.
std::vector<Segment> segments(const std::vector<Breakpoint>& P) {
  std::vector<Segment> seg(P.size() + 1);
  seg.front() = {P.front().u_left, 0.0};
  seg.back() = {P.back().u_right, 0.0};
  for (std::size_t i = 1; i < P.size(); ++i) {
    const double b = (P[i].u_left - P[i - 1].u_right) / (P[i].x - P[i - 1].x);
    seg[i] = {P[i - 1].u_right - b * P[i - 1].x, b};
  }
  return seg;
}

// Rankine-Hugoniot path of a shock starting at s0 between segments L and R:
// ds/dt = (uL(s,t) + uR(s,t)) / 2.  The linear ODE has a closed form in each
// slope configuration; all four stay finite up to the segment collapse times.
double shock_at(double s0, const Segment& L, const Segment& R, double dt) {
  const double bl = L.b, br = R.b;
  if (bl == 0.0 && br == 0.0) return s0 + 0.5 * (L.a + R.a) * dt;
  if (bl == br) {
    const double c = s0 + 0.5 * (L.a + R.a) / bl;
    return c * (1.0 + bl * dt) - 0.5 * (L.a + R.a) / bl;
  }
  if (br == 0.0) {
    const double c = s0 + (L.a - R.a) / bl;
    return c * std::sqrt(1.0 + bl * dt) - L.a / bl + (R.a / bl) * (1.0 + bl * dt);
  }
  if (bl == 0.0) {
    const double c = s0 + (R.a - L.a) / br;
    return c * std::sqrt(1.0 + br * dt) - R.a / br + (L.a / br) * (1.0 + br * dt);
  }
  const double c = s0 - (L.a - R.a) / (br - bl);
  return c * std::sqrt((1.0 + bl * dt) * (1.0 + br * dt)) +
         L.a * (1.0 + br * dt) / (br - bl) + R.a * (1.0 + bl * dt) / (bl - br);
}

// A node presents one face to each neighbour: a kink or an unopened fan edge
// moves with the carried value, a shock follows its closed-form path.
bool face_is_linear(const std::vector<Breakpoint>& P,
                    const std::vector<Segment>& S, std::size_t i) {
  if (!is_shock(P[i])) return true;
  return S[i].b == 0.0 && S[i + 1].b == 0.0;
}

double face_speed(const std::vector<Breakpoint>& P,
                  const std::vector<Segment>& S, std::size_t i,
                  bool left_face) {
  if (is_shock(P[i])) return 0.5 * (S[i].a + S[i + 1].a);
  return left_face ? P[i].u_left : P[i].u_right;
}

double face_pos(const std::vector<Breakpoint>& P, const std::vector<Segment>& S,
                std::size_t i, bool left_face, double dt) {
  if (is_shock(P[i])) return shock_at(P[i].x, S[i], S[i + 1], dt);
  return P[i].x + (left_face ? P[i].u_left : P[i].u_right) * dt;
}

// First time the facing edges of nodes i and i+1 coincide, or infinity.
// Gradient catastrophe, shock-node absorption, and shock merging are all
// instances of this.  The linear/linear case is a single division so that
// collision positions inherit the operands' exactness.
double pair_event_time(const std::vector<Breakpoint>& P,
                       const std::vector<Segment>& S, std::size_t i,
                       double horizon) {
  const double gap0 = P[i + 1].x - P[i].x;
  if (face_is_linear(P, S, i) && face_is_linear(P, S, i + 1)) {
    const double approach =
        face_speed(P, S, i, false) - face_speed(P, S, i + 1, true);
    if (!(approach > 0.0)) return kInf;
    return gap0 / approach;
  }
  // Curved faces: bracket the first root of the gap by sampling up to the
  // nearest segment collapse, then bisect.
  double hi = horizon;
  for (std::size_t k = i; k <= i + 2; ++k)
    if (S[k].b < 0.0) hi = std::min(hi, -1.0 / S[k].b);
  if (!(hi > 0.0) || !std::isfinite(hi)) return kInf;
  auto gap = [&](double dt) {
    return face_pos(P, S, i + 1, true, dt) - face_pos(P, S, i, false, dt);
  };
  const int m = 256;
  double lo = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double dt = hi * static_cast<double>(k) / m;
    if (gap(dt) <= 0.0) {
      double a = lo, b = dt;
      for (int it = 0; it < 128; ++it) {
        const double mid = 0.5 * (a + b);
        (gap(mid) > 0.0 ? a : b) = mid;
      }
      return 0.5 * (a + b);
    }
    lo = dt;
  }
  return kInf;
}

// Move every node forward by dt.  Fans open into their edge kinks; shock
// limits are re-read from the adjacent segments at the new position.
std::vector<Breakpoint> advance(const std::vector<Breakpoint>& P,
                                const std::vector<Segment>& S, double dt) {
  std::vector<Breakpoint> out;
  out.reserve(P.size() + 2);
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Breakpoint& n = P[i];
    if (is_fan(n)) {
      out.push_back({n.x + n.u_left * dt, n.u_left, n.u_left});
      out.push_back({n.x + n.u_right * dt, n.u_right, n.u_right});
    } else if (is_shock(n)) {
      const double s = shock_at(n.x, S[i], S[i + 1], dt);
      out.push_back({s, S[i].at(s, dt), S[i + 1].at(s, dt)});
    } else {
      out.push_back({n.x + n.u_left * dt, n.u_left, n.u_right});
    }
  }
  return out;
}

// Collapse coincident nodes into single discontinuities, keeping the
// outermost limits.  Exactly coincident positions keep the left node's x.
void merge_coincident(std::vector<Breakpoint>& P) {
  std::vector<Breakpoint> out;
  out.reserve(P.size());
  for (const Breakpoint& n : P) {
    if (!out.empty()) {
      const double tol =
          4e-12 * std::max({1.0, std::abs(out.back().x), std::abs(n.x)});
      if (n.x - out.back().x <= tol) {
        out.back().u_right = n.u_right;
        continue;
      }
    }
    out.push_back(n);
  }
  P = std::move(out);
}

double godunov_flux(double a, double b) {
  if (a > b) return a + b > 0.0 ? 0.5 * a * a : 0.5 * b * b;
  if (a > 0.0) return 0.5 * a * a;
  if (b < 0.0) return 0.5 * b * b;
  return 0.0;
}

}  // namespace

double PiecewiseProfile::left_value() const {
  validate(*this, "left_value");
  return points.front().u_left;
}

double PiecewiseProfile::right_value() const {
  validate(*this, "right_value");
  return points.back().u_right;
}

double PiecewiseProfile::slope_after(std::size_t i) const {
  if (i + 1 >= points.size()) return 0.0;
  return (points[i + 1].u_left - points[i].u_right) /
         (points[i + 1].x - points[i].x);
}

double PiecewiseProfile::value(double x) const {
  validate(*this, "value");
  if (x < points.front().x) return points.front().u_left;
  auto it = std::upper_bound(
      points.begin(), points.end(), x,
      [](double v, const Breakpoint& b) { return v < b.x; });
  const std::size_t i = static_cast<std::size_t>(it - points.begin()) - 1;
  return points[i].u_right + slope_after(i) * (x - points[i].x);
}

PiecewiseProfile step_ic() { return {{{0.0, 1.0, 0.0}}}; }

PiecewiseProfile ramp_ic(double shift) {
  return {{{shift, 1.0, 1.0}, {shift + 1.0, 0.0, 0.0}}};
}

PiecewiseProfile evolve_exact(const PiecewiseProfile& profile, double t) {
  validate(profile, "evolve_exact");
  if (!std::isfinite(t) || t < 0.0)
    throw std::invalid_argument("evolve_exact: t must be finite and >= 0");
  PiecewiseProfile cur = profile;
  double remaining = t;
  int rounds = 0;
  while (remaining > 0.0) {
    if (++rounds > 100000)
      throw std::runtime_error("evolve_exact: event cascade did not terminate");
    const std::vector<Segment> seg = segments(cur.points);
    double dt_event = kInf;
    for (std::size_t i = 0; i + 1 < cur.points.size(); ++i)
      dt_event =
          std::min(dt_event, pair_event_time(cur.points, seg, i, remaining));
    const bool fire = dt_event <= remaining;
    const double dt = fire ? dt_event : remaining;
    cur.points = advance(cur.points, seg, dt);
    if (fire) merge_coincident(cur.points);
    double prev = -kInf;
    for (const Breakpoint& b : cur.points) {
      if (!std::isfinite(b.x) || !std::isfinite(b.u_left) ||
          !std::isfinite(b.u_right) || !(b.x > prev))
        throw std::runtime_error(
            "evolve_exact: breakpoint tracking lost a well-ordered profile");
      prev = b.x;
    }
    remaining -= dt;
  }
  return cur;
}

std::vector<double> shock_positions(const PiecewiseProfile& profile) {
  validate(profile, "shock_positions");
  std::vector<double> out;
  for (const Breakpoint& b : profile.points)
    if (is_shock(b)) out.push_back(b.x);
  return out;
}

RealField evolve_godunov(const RealField& u0, double t, double cfl) {
  if (u0.values.size() != u0.grid.n)
    throw std::invalid_argument("evolve_godunov: field size mismatch");
  if (!u0.values.allFinite())
    throw std::invalid_argument("evolve_godunov: initial data must be finite");
  if (!std::isfinite(t) || t < 0.0)
    throw std::invalid_argument("evolve_godunov: t must be finite and >= 0");
  if (!(cfl > 0.0 && cfl <= 0.9))
    throw std::invalid_argument("evolve_godunov: cfl must be in (0, 0.9]");
  RealField out{u0.grid, u0.values, u0.t + t};
  if (t == 0.0) return out;
  const double dx = u0.grid.dx();
  const double umax = u0.values.abs().maxCoeff();
  // The scheme is monotone, so the initial bound on |u| holds for every step.
  const double dt_want = umax > 0.0 ? cfl * dx / umax : t;
  const long steps =
      std::max(1L, static_cast<long>(std::ceil(t / dt_want - 1e-9)));
  const double dt = t / static_cast<double>(steps);
  const Eigen::Index n = u0.grid.n;
  Eigen::ArrayXd u = u0.values;
  Eigen::ArrayXd flux(n + 1);
  for (long s = 0; s < steps; ++s) {
    flux[0] = godunov_flux(u[0], u[0]);
    for (Eigen::Index j = 1; j < n; ++j) flux[j] = godunov_flux(u[j - 1], u[j]);
    flux[n] = godunov_flux(u[n - 1], u[n - 1]);
    for (Eigen::Index j = 0; j < n; ++j)
      u[j] -= dt / dx * (flux[j + 1] - flux[j]);
  }
  out.values = std::move(u);
  return out;
}

std::string profile_csv(const PiecewiseProfile& profile) {
  std::ostringstream os;
  os << std::setprecision(17) << "x,u_left,u_right,slope_right\n";
  for (std::size_t i = 0; i < profile.points.size(); ++i) {
    const Breakpoint& b = profile.points[i];
    os << b.x << ',' << b.u_left << ',' << b.u_right << ','
       << profile.slope_after(i) << '\n';
  }
  return os.str();
}

}  // namespace rvlab
