#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace edgpe;
using edgpe::test::params;
using edgpe::test::rel;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("ansatz normalization and the kinetic coefficient") {
  const Grid3D g = Grid3D::cubic(48, 12.0);
  const WaveField u = sample_gaussian(g, {1.0, 1.0, 1.0});
  CHECK(rel(mass(u), 1.0) < 1e-12);
  CHECK(rel(gradient_norm_sq(u), 6.0) < 1e-6);
  const auto k = gaussian_energy_coeffs(1.0, 1.0, params(1, 0));
  CHECK(k.Atilde == doctest::Approx(3.0));
  CHECK(rel(mass(sample_gaussian(g, {1.2, 2.0, 3.5})), 3.5) < 1e-10);
}

TEST_CASE("closed form matches grid quadrature on both anisotropy branches") {
  const Grid3D g = Grid3D::cubic(64, 24.0);
  for (double p : {4.5, 5.0, 6.0}) {
    for (const GaussianAnsatz& a : {GaussianAnsatz{2.0, 3.0, 2.0}, GaussianAnsatz{3.0, 1.8, 5.0},
                                    GaussianAnsatz{2.2, 2.2, 1.0}}) {
      const ModelParams m = params(-0.7, 1.3, 0.8, p);
      const double grid = energy(sample_gaussian(g, a), m).E;
      CHECK(rel(grid, gaussian_energy(a, m)) < 1e-5);
    }
  }
}

TEST_CASE("dipolar shape function") {
  CHECK(btilde_shape(1.0) == doctest::Approx(0.0));
  for (double r : {0.95, 1.05}) {
    const double inner = btilde_shape(r + (r < 1 ? 1e-9 : -1e-9));
    const double outer = btilde_shape(r + (r < 1 ? -1e-9 : 1e-9));
    CHECK(std::abs(inner - outer) < 1e-7);
  }
  // Prolate (r < 1) densities along x3 lower the dipolar energy, oblate raise it.
  CHECK(btilde_shape(0.25) < 0.0);
  CHECK(btilde_shape(4.0) > 0.0);
}

TEST_CASE("depressed cubic roots") {
  const auto r = depressed_cubic_roots(3.0, -7.0, 4.0);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(-2.0 / 3.0));
  CHECK(r[1] == doctest::Approx(1.0));
  CHECK(r[2] == doctest::Approx(2.0));
  const auto one = depressed_cubic_roots(1.0, 0.0, 8.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(-2.0));
  CHECK_THROWS_AS(depressed_cubic_roots(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("negative-energy windows have zero-energy endpoints") {
  SUBCASE("p = 5, prolate shape in regime A3") {
    const ModelParams m = params(0, 1);
    const MassWindow w = negative_energy_window(1.0, 4.0, m);
    REQUIRE(w.exists);
    CHECK(std::abs(gaussian_energy({1.0, 4.0, w.lower}, m)) < 1e-9 * w.lower);
    CHECK(std::abs(gaussian_energy({1.0, 4.0, w.upper}, m)) < 1e-9 * w.upper);
    CHECK(gaussian_energy({1.0, 4.0, std::sqrt(w.lower * w.upper)}, m) < 0.0);
    CHECK_FALSE(negative_energy_window(4.0, 1.0, m).exists);
  }
  SUBCASE("p = 6 with attractive contact term") {
    const ModelParams m = params(-1, 0, 1, 6);
    const MassWindow w = negative_energy_window_p6(6.0, 6.0, m);
    REQUIRE(w.exists);
    CHECK(std::abs(gaussian_energy({6.0, 6.0, w.lower}, m)) < 1e-9 * w.lower);
    CHECK(std::abs(gaussian_energy({6.0, 6.0, w.upper}, m)) < 1e-9 * w.upper);
  }
  SUBCASE("general p") {
    const ModelParams m = params(-2, 0.5, 1, 4.5);
    const MassWindow w = negative_energy_window(1.5, 2.5, m);
    REQUIRE(w.exists);
    CHECK(std::abs(gaussian_energy({1.5, 2.5, w.lower}, m)) < 1e-9 * w.lower);
    CHECK(std::abs(gaussian_energy({1.5, 2.5, w.upper}, m)) < 1e-9 * w.upper);
  }
  SUBCASE("no window in regime A1") {
    CHECK_FALSE(negative_energy_window(1.0, 4.0, params(1, 0)).exists);
    CHECK_THROWS_AS(negative_energy_window_p5(1.0, 1.0, params(0, 1, 1, 6)), std::invalid_argument);
  }
}

TEST_CASE("Gaussian scan and witness mass") {
  ScanSpec spec;
  spec.sigma = log_space(0.1, 10.0, 31);
  spec.tau = log_space(0.1, 10.0, 31);
  spec.c = log_space(1e-2, 1e4, 13);
  const ScanReport a1 = gaussian_scan(params(1, 0), spec, false);
  CHECK_FALSE(a1.witness);
  CHECK_FALSE(a1.refined_witness);
  const ScanReport a3 = gaussian_scan(params(0, 1), spec, true);
  REQUIRE(a3.refined_witness);
  const GaussianAnsatz w = *a3.refined_witness;
  CHECK(std::abs(gaussian_energy(w, params(0, 1))) < 1e-8 * w.c);
  CHECK(a3.rows.size() == 31 * 31 * 13);
  CHECK(a3.best.E < 0.0);
  CHECK_THROWS_AS(gaussian_scan(params(0, 1), ScanSpec{}, false), std::invalid_argument);
  const auto ls = log_space(1.0, 100.0, 3);
  CHECK(ls[1] == doctest::Approx(10.0));
}

TEST_CASE("explicit lower bound c_a") {
  CHECK(std::isinf(mass_lower_bound_ca(params(1, 0), 0.45)));
  CHECK(std::isinf(mass_lower_bound_ca(params(10, -1), 0.45)));
  const double xi = 8.0 * pi / 3.0;
  const double C1 = std::pow(0.04073610212307956, 0.25);
  const double expect = std::min(16.0 / (25.0 * xi * xi), std::pow(xi, -3.0) * std::pow(C1, -8.0));
  CHECK(rel(mass_lower_bound_ca(params(0, 1), C1), expect) < 1e-14);
}

TEST_CASE("closed-form limits along the critical scalings") {
  // The p = 5 threshold tends to (4/27) of the tabulated constant, which is
  // the limit of -Btilde^3/Ctilde^2.
  const ModelParams a3 = params(0.3, 1.0);
  const double tau = 1e6;
  CHECK(rel(p5_threshold(std::sqrt(tau), tau, a3) * 27.0 / 4.0, printed_p5_limit_a3(a3)) < 1e-3);
  const ModelParams a4 = params(0.3, -1.0);
  // Slower approach along (sigma, sqrt(sigma)): relative gap ~ 7e3 / sigma.
  const double sigma = 1e9;
  CHECK(rel(p5_threshold(sigma, std::sqrt(sigma), a4) * 27.0 / 4.0, printed_p5_limit_a4(a4)) < 1e-3);
  CHECK(printed_p5_limit_a3(a3) > 0.0);
  CHECK(printed_p5_limit_a4(a4) > 0.0);
}
