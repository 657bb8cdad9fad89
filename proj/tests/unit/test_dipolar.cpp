#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace edgpe;
using edgpe::test::params;
using edgpe::test::rel;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("K^ on the axes and at the origin") {
  CHECK(khat({0.0, 0.0, 1.0}) == doctest::Approx(8.0 * pi / 3.0));
  CHECK(khat({1.0, 0.0, 0.0}) == doctest::Approx(-4.0 * pi / 3.0));
  CHECK(khat({0.0, 2.0, 0.0}) == doctest::Approx(-4.0 * pi / 3.0));
  CHECK(khat({0.0, 0.0, 0.0}) == 0.0);
  // Spherical mean zero: the three axes sum to zero.
  CHECK(khat({1, 0, 0}) + khat({0, 1, 0}) + khat({0, 0, 1}) == doctest::Approx(0.0));
  // Homogeneous of degree zero.
  CHECK(khat({1.0, 2.0, 3.0}) == doctest::Approx(khat({0.1, 0.2, 0.3})));
}

TEST_CASE("multiplier tables respect the K^ range") {
  const Grid3D g({16, 20, 24}, {10.0, 12.0, 9.0});
  const auto ctx = SpectralContext::for_grid(g);
  const auto& m = ctx->dipolar_multiplier();
  const auto& a = ctx->axial_fraction();
  CHECK(m[0] == 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m[i] >= -4.0 * pi / 3.0 - 1e-12);
    CHECK(m[i] <= 8.0 * pi / 3.0 + 1e-12);
    if (i > 0) CHECK(m[i] == doctest::Approx(4.0 * pi / 3.0 * (3.0 * a[i] - 1.0)));
  }
  const auto& mt = ctx->dipolar_multiplier(DipolarKernel::truncated);
  const auto& at = ctx->axial_fraction(DipolarKernel::truncated);
  CHECK(mt[0] == 0.0);
  for (std::size_t i = 0; i < mt.size(); ++i) CHECK(mt[i] == doctest::Approx(4.0 * pi / 3.0 * (3.0 * at[i] - 1.0)));
  CHECK(ctx->dipolar_cutoff_radius() == doctest::Approx(4.5));
}

TEST_CASE("cutoff factor: limits and series continuity") {
  CHECK(dipolar_cutoff_factor(0.0) == 0.0);
  CHECK(dipolar_cutoff_factor(1e3) == doctest::Approx(1.0).epsilon(1e-5));
  const double below = dipolar_cutoff_factor(0.1 - 1e-12);
  const double above = dipolar_cutoff_factor(0.1 + 1e-12);
  CHECK(std::abs(below - above) < 1e-12);
  CHECK(dipolar_cutoff_factor(0.05) == doctest::Approx(0.05 * 0.05 / 10.0).epsilon(1e-3));
}

TEST_CASE("Xi bound and regime classification") {
  CHECK(xi_bound(params(0, 1)) == doctest::Approx(8.0 * pi / 3.0));
  CHECK(xi_bound(params(1, 0)) == doctest::Approx(1.0));
  CHECK(xi_bound(params(-1, 0.5)) == doctest::Approx(4.0 * pi / 3.0 - 1.0));
  CHECK(classify_regime(params(1, 0)) == Regime::A1);
  CHECK(classify_regime(params(5, 1)) == Regime::A1);
  CHECK(classify_regime(params(0, 1)) == Regime::A3);
  CHECK(classify_regime(params(-1, 0)) == Regime::A3);
  CHECK(classify_regime(params(10, -1)) == Regime::A2);
  CHECK(classify_regime(params(0, -1)) == Regime::A4);
  CHECK(to_string(Regime::A4) == "A4");
  CHECK_THROWS_AS(classify_regime(params(0, 0)), ConfigError);
}

TEST_CASE("parameter validation collects every violation") {
  ModelParams m = params(0, 0, -1, 7);
  const auto v = m.violations();
  std::vector<std::string> codes;
  for (const auto& x : v) codes.push_back(x.code);
  CHECK(std::find(codes.begin(), codes.end(), "lambda3_positive") != codes.end());
  CHECK(std::find(codes.begin(), codes.end(), "p_range") != codes.end());
  CHECK(std::find(codes.begin(), codes.end(), "nondegeneracy") != codes.end());
  CHECK_THROWS_AS(m.validate(), ConfigError);
  CHECK(params(0, 1, 1, 6).violations().empty());
  CHECK_FALSE(params(0, 1, 1, 4).violations().empty());
  m = params(1, 0);
  m.trap = HarmonicTrap{-1.0, 1.0};
  CHECK(m.violations().front().code == "trap_ratio");
}

TEST_CASE("optimal B estimate on random fields") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  for (const auto& m : {params(0, 1), params(-1, 0.5), params(2, -1)}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const WaveField u = test::smooth_field(g, seed);
      const double b = b_functional(u, m, DipolarKernel::periodic);
      CHECK(std::abs(b) <= xi_bound(m) * std::pow(norm_lp(u, 4.0), 4.0) * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("B decomposes into contact and convolution parts") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField u = test::smooth_field(g, 11);
  for (auto kernel : {DipolarKernel::periodic, DipolarKernel::truncated}) {
    const auto phi = convolution_potential(u, kernel);
    std::vector<double> rho(g.size());
    density(u, rho);
    double dip = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) dip += phi[i] * rho[i];
    dip *= g.cell_volume();
    const double l4 = std::pow(norm_lp(u, 4.0), 4.0);
    CHECK(rel(b_functional(u, params(0.7, -0.3), kernel), 0.7 * l4 - 0.3 * dip) < 1e-10);
  }
}

TEST_CASE("truncated kernel removes the periodic image interaction") {
  // An isotropic density has no dipolar energy in free space. The box is not
  // cubic: on a cubic lattice the image sum vanishes by symmetry.
  const Grid3D g({40, 40, 56}, {10.0, 10.0, 14.0});
  const WaveField u = WaveField::from_function(g, [](double x, double y, double z) {
    return Complex(3.0 * std::exp(-(x * x + y * y + z * z)), 0.0);
  });
  const double scale = std::pow(norm_lp(u, 4.0), 4.0);
  const double truncated = b_functional(u, params(0, 1), DipolarKernel::truncated);
  const double periodic = b_functional(u, params(0, 1), DipolarKernel::periodic);
  CHECK(std::abs(truncated) < 1e-10 * scale);
  CHECK(std::abs(periodic) > 1e-4 * scale);
}

TEST_CASE("energy split sums to the energy") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField u = test::smooth_field(g, 5);
  for (const auto& m : {params(0, 1), params(-1, -0.5, 2.0, 4.5)}) {
    const EnergySplit s = energy_split(u, m);
    CHECK(rel(s.E1 + s.E2, energy(u, m).E) < 1e-10);
  }
}
