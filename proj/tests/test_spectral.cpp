#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "rvlab/spectral.hpp"

using namespace rvlab;

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

ComplexField random_field(const Grid1D& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexField f{Grid{g}, Eigen::ArrayXcd(g.n), 0.0};
  for (Eigen::Index j = 0; j < g.n; ++j)
    f.values[j] = Complex(dist(rng), dist(rng));
  return f;
}

}  // namespace

TEST_CASE("Parseval holds with no extra factors") {
  Grid1D g(-5.0, 11.0, 1 << 10);
  ComplexField f = random_field(g, 7);
  Spectrum s = forward_transform(f);
  const double direct = l2_norm_sq(f);
  const double fourier = s.dk() * s.coeffs.abs2().sum();
  CHECK(std::abs(direct - fourier) / direct < 1e-12);
}

TEST_CASE("transform round trip is close to identity") {
  Grid1D g(0.0, 2.0 * kPi, 1 << 12);
  ComplexField f = random_field(g, 19);
  ComplexField back = inverse_transform(forward_transform(f));
  const double err = (back.values - f.values).abs().maxCoeff();
  CHECK(err < 1e-12);
  CHECK(back.z == f.z);
}

TEST_CASE("transforms reject radial grids") {
  RadialGrid g(4.0, 64);
  ComplexField f = sample(g, [](double r) { return Complex(r, 0.0); });
  CHECK_THROWS_AS(forward_transform(f), std::invalid_argument);
  CHECK_THROWS_AS(spectral_derivative(f), std::invalid_argument);
}

TEST_CASE("plane wave H1 norm on [0, 2pi)") {
  Grid1D g(0.0, 2.0 * kPi, 64);
  const double k1 = 1.0;
  ComplexField f =
      sample(g, [&](double x) { return std::polar(1.0, k1 * x); });
  CHECK(l2_norm_sq(f) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(h1_norm_sq(f) ==
        doctest::Approx(2.0 * kPi * (1.0 + k1 * k1)).epsilon(1e-12));
  CHECK(h1_from_farfield(forward_transform(f)) ==
        doctest::Approx(2.0 * kPi * (1.0 + k1 * k1)).epsilon(1e-12));
}

TEST_CASE("spectral derivative of a trigonometric mode") {
  Grid1D g(-kPi, kPi, 256);
  ComplexField f = sample(g, [](double x) { return Complex(std::sin(3.0 * x), 0.0); });
  ComplexField d = spectral_derivative(f);
  double err = 0.0;
  for (Eigen::Index j = 0; j < g.n; ++j)
    err = std::max(err,
                   std::abs(d.values[j] - Complex(3.0 * std::cos(3.0 * g.x(j)), 0.0)));
  CHECK(err < 1e-11);
}

TEST_CASE("far-field identity matches the direct H1 route for smooth fields") {
  Grid1D g(-20.0, 20.0, 1 << 10);
  ComplexField f = sample(g, [](double x) {
    return Complex(std::exp(-x * x / 4.0) * std::cos(2.0 * x),
                   0.5 * std::exp(-x * x / 6.0));
  });
  const double direct = h1_norm_sq(f);
  const double farfield = h1_from_farfield(forward_transform(f));
  CHECK(std::abs(direct - farfield) / direct < 1e-10);
}

TEST_CASE("restricted H1 partitions exactly across a region split") {
  Grid1D g(-8.0, 8.0, 1 << 9);
  ComplexField f = sample(g, [](double x) {
    return Complex(std::exp(-x * x), std::sin(x));
  });
  auto inside = [](double x) { return std::abs(x) < 2.5; };
  auto outside = [&](double x) { return !inside(x); };
  const double whole = h1_norm_sq(f);
  const double split =
      h1_norm_sq_restricted(f, inside) + h1_norm_sq_restricted(f, outside);
  CHECK(std::abs(whole - split) / whole < 1e-12);

  // constant on half the domain: restriction picks up exactly half the mass
  ComplexField c = sample(g, [](double) { return Complex(2.0, 0.0); });
  const double half =
      h1_norm_sq_restricted(c, [](double x) { return x < 0.0; });
  CHECK(half == doctest::Approx(4.0 * 8.0).epsilon(1e-12));
}

TEST_CASE("radial quadrature integrates a Gaussian beam power") {
  RadialGrid g(12.0, 1 << 12);
  ComplexField f =
      sample(g, [](double r) { return Complex(9.0 * std::exp(-r * r), 0.0); });
  const double expected = 81.0 * kPi / 2.0;  // closed form of 2*pi*81*int r e^{-2r^2}
  CHECK(std::abs(l2_norm_sq(f) - expected) / expected < 1e-5);
}

TEST_CASE("radial gradient uses second-order differences") {
  RadialGrid g(10.0, 1 << 11);
  ComplexField f = sample(g, [](double r) { return Complex(std::exp(-r * r), 0.0); });
  ComplexField d = gradient(f);
  double err = 0.0;
  for (Eigen::Index j = 0; j < g.n; ++j) {
    const double r = g.r(j);
    err = std::max(err, std::abs(d.values[j].real() - (-2.0 * r * std::exp(-r * r))));
  }
  CHECK(err < 1e-4);
}
