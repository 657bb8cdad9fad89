#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace edgpe;
using edgpe::test::params;
using edgpe::test::rel;

namespace {
constexpr double pi = std::numbers::pi;

WaveField blob(const Grid3D& g, double amp = 1.0) {
  return WaveField::from_function(g, [amp](double x, double y, double z) {
    return Complex(amp * std::exp(-(x * x + y * y + 0.5 * z * z)), 0.0);
  });
}
}  // namespace

TEST_CASE("energy and virial bookkeeping") {
  CHECK(energy_from(2.0, 3.0, 5.0, 7.0, 5.0) == doctest::Approx(1.0 + 7.0 + 1.5 + 2.0));
  EnergyBreakdown e;
  e.A = 2.0;
  e.B = -4.0;
  e.C = 5.0;
  CHECK(virial_from(e, 5.0) == doctest::Approx(2.0 - 6.0 + 9.0 / 5.0 * 5.0));
  CHECK(virial_from(e, 6.0) == doctest::Approx(2.0 - 6.0 + 2.0 * 5.0));
}

TEST_CASE("energy components of a sampled field") {
  const Grid3D g = Grid3D::cubic(48, 16.0);
  const WaveField u = WaveField::from_function(g, [](double x, double y, double z) {
    return Complex(std::exp(-(x * x + y * y + z * z)), 0.0);
  });
  ModelParams m = params(1.0, 0.0, 2.0, 5.0);
  m.trap = HarmonicTrap{2.0, 3.0};
  const EnergyBreakdown e = energy(u, m);
  const double base = std::pow(pi / 2.0, 1.5);
  CHECK(rel(e.mass, base) < 1e-12);
  CHECK(rel(e.A, 3.0 * base) < 1e-10);
  CHECK(rel(e.B, std::pow(pi / 4.0, 1.5)) < 1e-8);
  CHECK(rel(e.C, 2.0 * std::pow(pi / 5.0, 1.5)) < 1e-6);
  CHECK(rel(e.V, (2.0 + 3.0 + 1.0) / 4.0 * base) < 1e-10);
  CHECK(rel(e.E, energy_from(e.A, e.B, e.C, e.V, 5.0)) < 1e-14);
  CHECK(rel(e.Q, virial_from(e, 5.0)) < 1e-14);
}

TEST_CASE("gradient matches directional derivatives") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField u = test::smooth_field(g, 1);
  const WaveField v = test::smooth_field(g, 2);
  for (const auto& m : {params(0, 1), params(-1, -0.5, 1.0, 6.0), params(1, 0.2, 0.5, 4.5)}) {
    const WaveField grad = energy_gradient(u, m);
    const double eps = 1e-5;
    WaveField up = u, um = u, dv = v;
    dv *= eps;
    up += dv;
    um -= dv;
    const double fd = (energy(up, m).E - energy(um, m).E) / (2.0 * eps);
    CHECK(rel(2.0 * inner_product(grad, v).real(), fd) < 1e-6);
    // <G u, u> = A/2 + B + C + V
    const EnergyBreakdown e = energy(u, m);
    CHECK(rel(inner_product(u, grad).real(), 0.5 * e.A + e.B + e.C + e.V) < 1e-10);
  }
}

TEST_CASE("model and free functions agree; cutoff resolution") {
  const Grid3D g({48, 48, 64}, {12.0, 12.0, 16.0});
  const WaveField u = blob(g, 2.0);
  const EnergyModel model(g, params(0, 1));
  CHECK(model.dipolar().cutoff == doctest::Approx(6.0));
  CHECK(model.energy(u).E == doctest::Approx(energy(u, params(0, 1)).E));
  const EnergyModel wide(g, params(0, 1), {DipolarKernel::truncated, 8.0});
  CHECK(wide.dipolar().cutoff == 8.0);
  const EnergyModel periodic(g, params(0, 1), {DipolarKernel::periodic, 0.0});
  CHECK(periodic.energy(u).B == doctest::Approx(b_functional(u, params(0, 1), DipolarKernel::periodic)));
  CHECK_THROWS_AS(EnergyModel(g, params(0, 1), {DipolarKernel::truncated, -1.0}), std::invalid_argument);
  // A field much smaller than either cutoff sees the same truncated energy.
  const WaveField small = WaveField::from_function(g, [](double x, double y, double z) {
    return Complex(std::exp(-(x * x + y * y + z * z)), 0.0);
  });
  const double b6 = b_functional(small, params(1, 0));
  CHECK(std::abs(model.energy(small).B - wide.energy(small).B) < 1e-8 * b6);
}

TEST_CASE("chemical potential: both formulas at a Gaussian") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField u = blob(g);
  const ModelParams m = params(0.5, 0.3);
  const ChemicalPotentialReport c = chemical_potential(u, m);
  const EnergyBreakdown e = energy(u, m);
  CHECK(rel(c.beta_rayleigh, -(0.5 * e.A + e.B + e.C + e.V) / e.mass) < 1e-12);
  CHECK(rel(c.beta_pohozaev, (-0.25 * e.B + (m.p - 6.0) / (2.0 * m.p) * e.C) / e.mass) < 1e-12);
  CHECK(c.residual_norm > 0.0);
  CHECK_THROWS_AS(chemical_potential(WaveField(g), m), std::invalid_argument);
}

TEST_CASE("scaling laws of the three rescalings") {
  const Grid3D g = Grid3D::cubic(64, 24.0);
  const WaveField u = WaveField::from_function(g, [](double x, double y, double z) {
    return Complex(1.5 * std::exp(-0.25 * (x * x + y * y + 0.5 * z * z)), 0.0);
  });
  const ModelParams m = params(1.0, 0.0, 1.0, 5.0);
  const EnergyBreakdown e = energy(u, m);
  const double t = 1.3;

  const Rescaled r1 = rescale_mass_preserving(u, t);
  CHECK(r1.warnings.empty());
  const EnergyBreakdown e1 = energy(r1.field, m);
  CHECK(rel(e1.mass, e.mass) < 1e-8);
  CHECK(rel(e1.A, t * t * e.A) < 1e-8);
  CHECK(rel(e1.B, t * t * t * e.B) < 1e-8);
  CHECK(rel(e1.C, std::pow(t, 4.5) * e.C) < 1e-8);

  const Rescaled r2 = rescale_c_changing(u, t, 5.0);
  const EnergyBreakdown e2 = energy(r2.field, m);
  CHECK(rel(e2.mass, std::pow(t, 3.0 - 6.0 / 5.0) * e.mass) < 1e-8);
  CHECK(rel(e2.C, e.C) < 1e-8);

  const Rescaled r3 = rescale_anisotropic(u, t);
  CHECK(rel(mass(r3.field), e.mass) < 1e-8);
  // ||d1 u||^2 = ||d2 u||^2 = m/4 and ||d3 u||^2 = m/8 for this blob; the
  // transverse parts scale by t^2 and the axial part by t.
  CHECK(rel(e.A, 0.625 * e.mass) < 1e-8);
  CHECK(rel(gradient_norm_sq(r3.field), (0.5 * t * t + 0.125 * t) * e.mass) < 1e-8);

  const Rescaled clipped = rescale_mass_preserving(u, 0.2);
  CHECK_FALSE(clipped.warnings.empty());
}

TEST_CASE("energy is invariant under translation and phase") {
  const Grid3D g = Grid3D::cubic(32, 16.0);
  const WaveField u = test::smooth_field(g, 9);
  const ModelParams m = params(-0.5, 1.0);
  const double e = energy(u, m).E;
  WaveField v = u;
  v *= std::polar(1.0, 1.1);
  CHECK(rel(energy(v, m).E, e) < 1e-12);
  CHECK(rel(energy(translate(u, {0.5, 0.0, 0.5}), m).E, e) < 1e-10);
}
