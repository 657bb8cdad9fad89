#include <cmath>
#include <numbers>
#include <ostream>

#include "edgpe/commands.hpp"
#include "edgpe/errors.hpp"
#include "edgpe/io.hpp"

namespace edgpe {

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Suite {
  std::vector<VerifyCheck> checks;
  std::ostream& log;

  void add(std::string name, bool pass, std::string detail) {
    log << (pass ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  template <class F>
  void run(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(name, false, std::string("threw: ") + e.what());
    }
  }
};

}  // namespace

std::vector<VerifyCheck> run_verify(const RunConfig& config, std::ostream& log) {
  Suite s{{}, log};
  std::mt19937_64 rng(config.seed);
  ModelParams params = config.params;
  params.trap.reset();
  const Grid3D grid = Grid3D::cubic(32, 16.0);

  s.run("spectral.parseval", [&] {
    const WaveField u = random_smooth_field(grid, rng);
    const auto spec = forward_transform(u);
    double sum = 0.0;
    for (const Complex& z : spec.values()) sum += std::norm(z);
    const double spectral = sum / (grid.volume());
    const double r = rel(spectral, mass(u));
    s.add("spectral.parseval", r < 1e-10, "relative mismatch " + format_double(r));
  });

  s.run("dipolar.khat_range", [&] {
    const auto ctx = SpectralContext::for_grid(grid);
    double lo = 1e300, hi = -1e300;
    const auto& m = ctx->dipolar_multiplier();
    for (std::size_t i = 1; i < m.size(); ++i) {
      lo = std::min(lo, m[i]);
      hi = std::max(hi, m[i]);
    }
    const bool ok = lo >= -4.0 * pi / 3.0 - 1e-12 && hi <= 8.0 * pi / 3.0 + 1e-12;
    s.add("dipolar.khat_range", ok, "min " + format_double(lo) + ", max " + format_double(hi));
  });

  s.run("dipolar.b_estimate", [&] {
    double worst = 0.0;
    const double xi = xi_bound(params);
    for (int t = 0; t < 10; ++t) {
      const WaveField u = random_smooth_field(grid, rng);
      worst = std::max(worst, std::abs(b_functional(u, params)) / (xi * std::pow(norm_lp(u, 4.0), 4.0)));
    }
    s.add("dipolar.b_estimate", worst <= 1.0 + 1e-8, "max |B|/(Xi ||u||_4^4) " + format_double(worst));
  });

  s.run("gaussian.closed_form", [&] {
    const GaussianAnsatz g{1.3, 1.7, 2.0};
    const double grid_e = energy(sample_gaussian(Grid3D::cubic(48, 16.0), g), params).E;
    const double r = rel(grid_e, gaussian_energy(g, params));
    s.add("gaussian.closed_form", r < 1e-4, "relative mismatch " + format_double(r));
  });

  s.run("functionals.gradient", [&] {
    const WaveField u = random_smooth_field(grid, rng);
    const WaveField v = random_smooth_field(grid, rng);
    const EnergyModel model(grid, params);
    WaveField g(grid);
    model.energy_and_gradient(u, g);
    const double eps = 1e-5;
    WaveField up = u, um = u;
    WaveField dv = v;
    dv *= eps;
    up += dv;
    um -= dv;
    const double fd = (model.energy(up).E - model.energy(um).E) / (2.0 * eps);
    const double an = 2.0 * inner_product(g, v).real();
    const double r = rel(an, fd);
    s.add("functionals.gradient", r < 1e-6, "directional derivative mismatch " + format_double(r));
  });

  s.run("functionals.virial_derivative", [&] {
    const WaveField u = sample_gaussian(Grid3D::cubic(48, 16.0), GaussianAnsatz{2.4, 3.2, 3.0});
    const double h = 1e-3;
    const double ep = energy(rescale_mass_preserving(u, 1.0 + h).field, params).E;
    const double em = energy(rescale_mass_preserving(u, 1.0 - h).field, params).E;
    const double q = virial(u, params);
    const double r = std::abs((ep - em) / (2.0 * h) - q) / std::max(1.0, std::abs(q));
    s.add("functionals.virial_derivative", r < 1e-6, "dE/dt at t = 1 vs Q: " + format_double(r));
  });

  s.run("dynamics.conservation", [&] {
    const WaveField u = sample_gaussian(grid, GaussianAnsatz{1.5, 1.5, 1.0});
    PropagationConfig pc;
    pc.dt = 1e-3;
    pc.t_end = 0.2;
    pc.snapshot_stride = 50;
    const auto r = propagate(u, params, pc);
    const double m = r.trace.max_relative_mass_drift();
    s.add("dynamics.conservation", m < 1e-10, "mass drift " + format_double(m) + ", energy drift " +
                                                  format_double(r.trace.max_relative_energy_drift()));
  });

  s.run("dynamics.reversibility", [&] {
    const WaveField u = sample_gaussian(grid, GaussianAnsatz{1.5, 1.5, 1.0});
    const EnergyModel model(grid, params);
    const StrangPropagator fwd(model, 1e-3);
    WaveField psi = u;
    fwd.advance(psi, 100);
    for (Complex& z : psi.values()) z = std::conj(z);
    fwd.advance(psi, 100);
    for (Complex& z : psi.values()) z = std::conj(z);
    psi -= u;
    const double r = norm_lp(psi, 2.0) / norm_lp(u, 2.0);
    s.add("dynamics.reversibility", r < 1e-8, "relative return error " + format_double(r));
  });

  s.run("dynamics.gauge", [&] {
    const WaveField u = random_smooth_field(grid, rng);
    const Complex phase = std::polar(1.0, 0.7);
    WaveField v = u;
    v *= phase;
    const WaveField a = strang_step(u, 1e-3, params);
    WaveField b = strang_step(v, 1e-3, params);
    WaveField ap = a;
    ap *= phase;
    b -= ap;
    const double r = norm_lp(b, 2.0) / norm_lp(a, 2.0);
    s.add("dynamics.gauge", r < 1e-12, "relative defect " + format_double(r));
  });

  s.run("thresholds.gaussian_lower_bound", [&] {
    const GNConstant gn = gn_constant_shooting(1.0);
    const double j = weinstein_quotient(sample_gaussian(grid, GaussianAnsatz{1.5, 1.5, 1.0}), 1.0);
    s.add("thresholds.gaussian_lower_bound", j <= gn.quotient,
          "Gaussian quotient " + format_double(j) + " <= C1^4 " + format_double(gn.quotient));
  });

  s.run("cli_io.config_errors", [&] {
    auto code_of = [](const char* text) -> std::string {
      try {
        parse_config(text);
      } catch (const ConfigError& e) {
        return e.violations().front().code;
      }
      return "";
    };
    const bool ok = code_of(R"({"lambda1": 1, "p": 7})") == "p_range" &&
                    code_of(R"({"lambda1": 0, "lambda2": 0})") == "nondegeneracy";
    s.add("cli_io.config_errors", ok, "p = 7 and lambda1 = lambda2 = 0 rejected with distinct codes");
  });

  s.run("cli_io.snapshot_roundtrip", [&] {
    const WaveField u = random_smooth_field(grid, rng);
    const WaveField v = decode_snapshot(encode_snapshot(u));
    const bool ok = v.grid() == u.grid() && std::equal(u.values().begin(), u.values().end(), v.values().begin());
    s.add("cli_io.snapshot_roundtrip", ok, "bitwise identical after encode/decode");
  });

  return s.checks;
}

}  // namespace edgpe
