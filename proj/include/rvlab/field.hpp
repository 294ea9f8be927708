#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <variant>

// Grids and sampled fields shared by every solver, plus the binary snapshot
// format used to persist them.  All storage is double precision; snapshot
// files are bit-exact round trips of what is in memory.

namespace rvlab {

using Complex = std::complex<double>;

enum class GridKind : std::uint8_t { periodic1d = 0, radial = 1 };

/// Uniform periodic grid on [x_min, x_max); sample j sits at x_min + j*dx.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  Eigen::Index n = 0;

  Grid1D() = default;
  Grid1D(double x_min_, double x_max_, Eigen::Index n_)
      : x_min(x_min_), x_max(x_max_), n(n_) {
    if (!(x_min < x_max))
      throw std::invalid_argument("Grid1D: x_min must be < x_max");
    if (n < 8 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Grid1D: n must be a power of two >= 8");
  }

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n); }
  double x(Eigen::Index j) const { return x_min + static_cast<double>(j) * dx(); }

  bool operator==(const Grid1D&) const = default;
};

/// Uniform radial grid; sample j sits at r_j = j*dr with dr = r_max/n.
/// r = 0 is always included; r_max itself is the Dirichlet ghost point and
/// carries no sample.
struct RadialGrid {
  double r_max = 0.0;
  Eigen::Index n = 0;

  RadialGrid() = default;
  RadialGrid(double r_max_, Eigen::Index n_) : r_max(r_max_), n(n_) {
    if (!(r_max > 0.0))
      throw std::invalid_argument("RadialGrid: r_max must be positive");
    if (n < 8) throw std::invalid_argument("RadialGrid: n must be >= 8");
  }

  double dr() const { return r_max / static_cast<double>(n); }
  double r(Eigen::Index j) const { return static_cast<double>(j) * dr(); }

  bool operator==(const RadialGrid&) const = default;
};

using Grid = std::variant<Grid1D, RadialGrid>;

inline GridKind kind(const Grid& g) {
  return std::holds_alternative<Grid1D>(g) ? GridKind::periodic1d
                                           : GridKind::radial;
}

inline Eigen::Index sample_count(const Grid& g) {
  return std::visit([](const auto& gr) { return gr.n; }, g);
}

inline double spacing(const Grid& g) {
  if (const auto* p = std::get_if<Grid1D>(&g)) return p->dx();
  return std::get<RadialGrid>(g).dr();
}

inline double coord(const Grid& g, Eigen::Index j) {
  if (const auto* p = std::get_if<Grid1D>(&g)) return p->x(j);
  return std::get<RadialGrid>(g).r(j);
}

inline bool operator==(const Grid& a, const Grid& b) {
  if (a.index() != b.index()) return false;
  if (const auto* p = std::get_if<Grid1D>(&a))
    return *p == std::get<Grid1D>(b);
  return std::get<RadialGrid>(a) == std::get<RadialGrid>(b);
}

/// Complex-valued samples on either grid kind, tagged with the evolution
/// coordinate z (propagation distance, or time for wave equations).
struct ComplexField {
  Grid grid;
  Eigen::ArrayXcd values;
  double z = 0.0;
};

/// Real-valued samples on a periodic 1D grid, tagged with time t.
struct RealField {
  Grid1D grid;
  Eigen::ArrayXd values;
  double t = 0.0;
};

namespace detail {

[[noreturn]] inline void throw_nonfinite(Eigen::Index j, double x) {
  std::ostringstream os;
  os << "sample: non-finite value at index " << j << " (coordinate " << x
     << ")";
  throw std::domain_error(os.str());
}

}  // namespace detail

/// Evaluates f at every grid coordinate.  Throws std::domain_error naming the
/// first offending index if f returns a non-finite value.
template <class G, class F>
auto sample(const G& grid, F&& f, double when = 0.0) {
  using result = std::invoke_result_t<F&, double>;
  constexpr bool is_complex = std::is_same_v<result, Complex>;
  static_assert(is_complex || std::is_convertible_v<result, double>,
                "sample: f must return double or std::complex<double>");
  if constexpr (is_complex) {
    ComplexField out{Grid{grid}, Eigen::ArrayXcd(grid.n), when};
    for (Eigen::Index j = 0; j < grid.n; ++j) {
      const double c = coord(out.grid, j);
      const Complex v = f(c);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        detail::throw_nonfinite(j, c);
      out.values[j] = v;
    }
    return out;
  } else {
    static_assert(std::is_same_v<G, Grid1D>,
                  "sample: real fields live on Grid1D only");
    RealField out{grid, Eigen::ArrayXd(grid.n), when};
    for (Eigen::Index j = 0; j < grid.n; ++j) {
      const double c = grid.x(j);
      const double v = f(c);
      if (!std::isfinite(v)) detail::throw_nonfinite(j, c);
      out.values[j] = v;
    }
    return out;
  }
}

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Binary snapshot layout (little endian, no padding):
///   "RVLB" | u32 version | u8 grid kind | u64 n | f64 x_min | f64 x_max |
///   f64 z | n * (f64 re, f64 im)
/// Real fields are written with im = 0.
void save_snapshot(const ComplexField& field, const std::filesystem::path& path);
void save_snapshot(const RealField& field, const std::filesystem::path& path);

ComplexField load_snapshot(const std::filesystem::path& path);

/// Loads a snapshot whose imaginary parts must all be exactly zero.
RealField load_snapshot_real(const std::filesystem::path& path);

}  // namespace rvlab
