#include <doctest.h>

#include "support.hpp"

using namespace edgpe;
using edgpe::test::params;
using edgpe::test::rel;

namespace {
constexpr double gn_quotient_sigma1 = 0.04073610212307956;
}

TEST_CASE("shooting ground state and its quotient") {
  const GNConstant s = gn_constant_shooting(1.0);
  CHECK(s.method == GNMethod::ode_ground_state);
  CHECK(rel(s.quotient, gn_quotient_sigma1) < 1e-8);
  CHECK(rel(std::pow(s.value, 4.0), s.quotient) < 1e-12);
  CHECK(s.residual < 1e-6);
  const GNConstant s2 = gn_constant_shooting(0.8);
  CHECK(s2.residual < 1e-6);
  CHECK_THROWS_AS(gn_constant_shooting(2.0), std::invalid_argument);
  CHECK_THROWS_AS(gn_constant_shooting(0.0), std::invalid_argument);
}

TEST_CASE("direct maximization agrees with shooting") {
  GNOptions o;
  o.points = 48;
  const GNConstant d = gn_constant(1.0, o);
  CHECK(d.method == GNMethod::direct_maximization);
  REQUIRE(d.cross_check);
  CHECK(rel(d.value, *d.cross_check) < 1e-3);
  CHECK(d.residual < 1e-10);
  CHECK(to_string(d.method) == "direct_maximization");
}

TEST_CASE("Weinstein quotient: scaling invariance and the sup bound") {
  const Grid3D g = Grid3D::cubic(48, 16.0);
  const WaveField u = sample_gaussian(g, {2.0, 2.0, 1.0});
  const double j = weinstein_quotient(u, 1.0);
  CHECK(j <= gn_quotient_sigma1);
  WaveField a = u;
  a *= 3.7;
  CHECK(rel(weinstein_quotient(a, 1.0), j) < 1e-12);
  const WaveField b = rescale_mass_preserving(u, 1.3).field;
  CHECK(rel(weinstein_quotient(b, 1.0), j) < 1e-8);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK(weinstein_quotient(test::smooth_field(g, seed), 1.0) <= gn_quotient_sigma1);
  const WaveField flat = WaveField::from_function(g, [](double, double, double) { return Complex(1.0, 0.0); });
  CHECK_THROWS_AS(weinstein_quotient(flat, 1.0), std::invalid_argument);
}

TEST_CASE("energy is positive below c_a") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const double C1 = std::pow(gn_quotient_sigma1, 0.25);
  for (const auto& m : {params(0, 1), params(0.5, -1.0)}) {
    const double ca = mass_lower_bound_ca(m, C1);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      WaveField u = test::smooth_field(g, seed);
      u *= std::sqrt(0.9 * ca / mass(u));
      CHECK(energy(u, m).E > 0.0);
    }
  }
}

TEST_CASE("threshold report in the trivial regimes") {
  ThresholdConfig tc;
  tc.C1 = std::pow(gn_quotient_sigma1, 0.25);
  const ThresholdReport r = threshold_report(params(1, 0), tc);
  CHECK(r.regime == Regime::A1);
  CHECK(std::isinf(r.c_a));
  CHECK_FALSE(r.c_b);
  CHECK(r.ordering_ok);
  CHECK_THROWS_AS(threshold_report(params(0, 0), tc), ConfigError);
}

TEST_CASE("threshold report without the bisection") {
  ThresholdConfig tc;
  tc.C1 = std::pow(gn_quotient_sigma1, 0.25);
  tc.estimate_cb = false;
  const ThresholdReport r = threshold_report(params(0, 1), tc);
  CHECK(r.regime == Regime::A3);
  REQUIRE(r.c_c);
  CHECK(r.c_a < *r.c_c);
  CHECK(r.witness);
  CHECK(gaussian_energy(*r.witness, params(0, 1)) <= 1e-8 * r.witness->c);
}
