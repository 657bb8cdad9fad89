#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace edgpe;
using edgpe::test::rel;

namespace {
constexpr double pi = std::numbers::pi;

WaveField gaussian(const Grid3D& g, double a) {
  return WaveField::from_function(g, [a](double x, double y, double z) {
    return Complex(std::exp(-a * (x * x + y * y + z * z)), 0.0);
  });
}
}  // namespace

TEST_CASE("grid geometry and wavenumber order") {
  const Grid3D g({8, 4, 6}, {8.0, 2.0, 3.0});
  CHECK(g.size() == 192);
  CHECK(g.spacing(0) == doctest::Approx(1.0));
  CHECK(g.coordinate(0, 0) == doctest::Approx(-4.0));
  CHECK(g.coordinate(2, 5) == doctest::Approx(1.0));
  const auto& k = g.wavenumbers(0);
  CHECK(k[1] == doctest::Approx(2.0 * pi / 8.0));
  CHECK(k[4] == doctest::Approx(-4.0 * 2.0 * pi / 8.0));
  CHECK(k[7] == doctest::Approx(-2.0 * pi / 8.0));
  CHECK(g.index(1, 2, 3) == 1 + 8 * (2 + 4 * 3));
}

TEST_CASE("Parseval and transform round trip") {
  const Grid3D g = Grid3D::cubic(32, 12.0);
  const WaveField u = test::smooth_field(g, 3);
  const WaveField spec = forward_transform(u);
  double s = 0.0;
  for (const Complex& z : spec.values()) s += std::norm(z);
  CHECK(rel(s / g.volume(), mass(u)) < 1e-12);
  WaveField back = inverse_transform(spec);
  back -= u;
  CHECK(norm_lp(back, 2.0) < 1e-12 * norm_lp(u, 2.0));
}

TEST_CASE("continuum transform of a Gaussian") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField spec = forward_transform(gaussian(g, 1.0));
  // F(exp(-|x|^2))(0) = pi^{3/2}
  CHECK(rel(spec(0, 0, 0).real(), std::pow(pi, 1.5)) < 1e-12);
  // F at xi = (2 pi/L, 0, 0): pi^{3/2} exp(-|xi|^2/4), real and positive.
  const double xi = 2.0 * pi / 16.0;
  CHECK(rel(spec(1, 0, 0).real(), std::pow(pi, 1.5) * std::exp(-xi * xi / 4.0)) < 1e-12);
  CHECK(std::abs(spec(1, 0, 0).imag()) < 1e-12);
}

TEST_CASE("norms, gradient and Laplacian of a Gaussian") {
  const Grid3D g = Grid3D::cubic(48, 16.0);
  const WaveField u = gaussian(g, 1.0);
  // ||e^{-|x|^2}||_2^2 = (pi/2)^{3/2}, ||grad||^2 = 3 (pi/2)^{3/2}
  CHECK(rel(mass(u), std::pow(pi / 2.0, 1.5)) < 1e-12);
  CHECK(rel(gradient_norm_sq(u), 3.0 * std::pow(pi / 2.0, 1.5)) < 1e-10);
  CHECK(rel(std::pow(norm_lp(u, 4.0), 4.0), std::pow(pi / 4.0, 1.5)) < 1e-8);
  CHECK(rel(h1_norm(u), std::sqrt(4.0 * std::pow(pi / 2.0, 1.5))) < 1e-10);
  const WaveField lap = laplacian(u);
  // Lap e^{-r^2} = (4 r^2 - 6) e^{-r^2}; at the origin -6.
  CHECK(lap(24, 24, 24).real() == doctest::Approx(-6.0).epsilon(1e-10));
  CHECK_THROWS_AS(norm_lp(u, 0.5), std::invalid_argument);
}

TEST_CASE("translation is spectrally exact and periodic") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField u = gaussian(g, 0.5);
  WaveField v = translate(u, {1.5, -2.0, 0.5});
  CHECK(v(19, 12, 17).real() == doctest::Approx(u(16, 16, 16).real()).epsilon(1e-10));
  WaveField w = translate(v, {-1.5, 2.0, -0.5});
  w -= u;
  CHECK(norm_lp(w, 2.0) < 1e-12);
  CHECK(rel(mass(v), mass(u)) < 1e-12);
}

TEST_CASE("boundary mass fraction") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  CHECK(boundary_mass_fraction(gaussian(g, 1.0)) < 1e-20);
  const WaveField flat = WaveField::from_function(g, [](double, double, double) { return Complex(1.0, 0.0); });
  // Samples with |x_i| > 7L/16: three of 32 per axis.
  CHECK(boundary_mass_fraction(flat) == doctest::Approx(1.0 - std::pow(29.0 / 32.0, 3)));
}

TEST_CASE("field arithmetic requires a common grid") {
  const WaveField a(Grid3D::cubic(8, 1.0));
  const WaveField b(Grid3D::cubic(8, 2.0));
  WaveField c = a;
  CHECK_THROWS_AS(c += b, std::invalid_argument);
  CHECK_THROWS_AS(require_same_grid(a, b), std::invalid_argument);
}
