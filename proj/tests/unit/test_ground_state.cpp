#include <doctest.h>

#include "support.hpp"

using namespace edgpe;
using edgpe::test::params;
using edgpe::test::rel;

TEST_CASE("constrained descent keeps the mass and lowers the energy") {
  const Grid3D g({32, 32, 40}, {12.0, 12.0, 16.0});
  const EnergyModel model(g, params(0, 1), {DipolarKernel::truncated, 8.0});
  SolverConfig cfg;
  cfg.max_iters = 120;
  const SolveResult r = minimize_from(model, sample_gaussian(g, {1.2, 3.0, 25.0}), 25.0, cfg);
  CHECK(rel(mass(r.field), 25.0) < 1e-10);
  CHECK(r.energy_monotone);
  CHECK(r.energy.E < 0.0);
  CHECK(r.energy.E <= r.energy_history.front());
  for (std::size_t i = 1; i < r.energy_history.size(); ++i)
    CHECK(r.energy_history[i] <= r.energy_history[i - 1] + 1e-12 * std::abs(r.energy_history[i - 1]));
  CHECK(r.chemical.beta_rayleigh > 0.0);
  CHECK_THROWS_AS(minimize_from(model, r.field, -1.0, cfg), std::invalid_argument);
}

TEST_CASE("repulsive regime spreads") {
  const Grid3D g = Grid3D::cubic(24, 12.0);
  const EnergyModel model(g, params(1, 0));
  SolverConfig cfg;
  cfg.max_iters = 3000;
  const SolveResult r = minimize_from(model, sample_gaussian(g, {1.0, 1.0, 1.0}), 1.0, cfg);
  CHECK(r.status == SolveStatus::spreading);
  CHECK(r.energy.E > 0.0);
  CHECK(to_string(SolveStatus::spreading) == "spreading");
}

TEST_CASE("default restarts fit the box") {
  const Grid3D g({32, 32, 48}, {12.0, 12.0, 16.0});
  const auto r = default_restarts(params(0, 1), 25.0, g);
  REQUIRE(r.size() == 3);
  for (const auto& a : r) {
    CHECK(a.c == 25.0);
    CHECK(a.sigma <= 3.0 + 1e-12);
    CHECK(a.tau <= 4.0 + 1e-12);
  }
  // Prolate along x3 for lambda2 > 0.
  CHECK(r[0].tau > r[0].sigma);
}

TEST_CASE("gamma curve shape predicates") {
  GammaCurve c;
  c.masses = {1, 2, 3, 4, 5};
  c.gammas = {0, 0, -1, -3, -5};
  CHECK(c.nonincreasing(0.0));
  CHECK(c.concave(0.0));
  const auto d = c.second_differences();
  REQUIRE(d.size() == 3);
  CHECK(d[0] == doctest::Approx(-1.0));
  c.gammas = {0, -2, -3, -3.5, -3.6};
  CHECK_FALSE(c.concave(1e-6));
  c.gammas = {0, 0, 1e-3, -1, -2};
  CHECK_FALSE(c.nonincreasing(1e-6));
  CHECK(c.nonincreasing(1e-2));
}

TEST_CASE("reflection extensions and the mass-splitting plane") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField u = test::smooth_field(g, 21);
  const double t = mass_splitting_plane(u, 3);
  const WaveField lo = reflection_extension(u, 3, 1, t);
  const WaveField hi = reflection_extension(u, 3, 2, t);
  // Each extension doubles one half; together they carry twice the mass.
  CHECK(rel(mass(lo) + mass(hi), 2.0 * mass(u)) < 5e-2);
  // A field symmetric about x1 = 0 splits at the origin and is its own extension.
  const WaveField s = sample_gaussian(g, {2.0, 2.5, 1.0});
  CHECK(std::abs(mass_splitting_plane(s, 1)) < 1e-12);
  WaveField e = reflection_extension(s, 1, 1, 0.0);
  e -= s;
  CHECK(norm_lp(e, 2.0) < 1e-10);
  CHECK_THROWS_AS(reflection_extension(u, 4, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(reflection_extension(u, 1, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(reflection_extension(u, 1, 1, 9.0), std::invalid_argument);
}

TEST_CASE("qualitative diagnostics of an axisymmetric Gaussian") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField u = translate(sample_gaussian(g, {2.0, 3.0, 1.0}), {0.5, 0.0, -0.5});
  const QualitativeReport q = qualitative_diagnostics(u);
  CHECK(q.center[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(q.center[2] == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(q.phase_deviation < 1e-10);
  CHECK(q.min_modulus_core > 0.0);
  CHECK(q.axial_defect < 1e-3);
  CHECK(q.planar_defect < 1e-8);
}
