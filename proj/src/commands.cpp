#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "edgpe/commands.hpp"
#include "edgpe/errors.hpp"
#include "edgpe/io.hpp"
#include "edgpe/parallel.hpp"

namespace edgpe {

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Json to_json(const ModelParams& p) {
  Json j{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"lambda3", p.lambda3}, {"p", p.p}};
  if (p.trap) j["trap"] = {{"ratio1", p.trap->ratio1}, {"ratio2", p.trap->ratio2}};
  else j["trap"] = nullptr;
  j["regime"] = to_string(classify_regime(p));
  return j;
}

Json to_json(const EnergyBreakdown& e) {
  return {{"A", number(e.A)}, {"B", number(e.B)}, {"C", number(e.C)}, {"V", number(e.V)},
          {"E", number(e.E)}, {"Q", number(e.Q)}, {"mass", number(e.mass)}};
}

Json to_json(const ChemicalPotentialReport& c) {
  return {{"beta_pohozaev", number(c.beta_pohozaev)},
          {"beta_rayleigh", number(c.beta_rayleigh)},
          {"residual_norm", number(c.residual_norm)}};
}

Json to_json(const QualitativeReport& q) {
  return {{"phase_deviation", number(q.phase_deviation)}, {"min_modulus_core", number(q.min_modulus_core)},
          {"max_modulus", number(q.max_modulus)},         {"axial_defect", number(q.axial_defect)},
          {"radial_defect", number(q.radial_defect)},     {"planar_defect", number(q.planar_defect)},
          {"decay_slope", number(q.decay_slope)},         {"decay_r2", number(q.decay_r2)},
          {"center", {q.center[0], q.center[1], q.center[2]}}};
}

Json to_json(const GaussianAnsatz& g) { return {{"sigma", g.sigma}, {"tau", g.tau}, {"c", number(g.c)}}; }

Json to_json(const MassWindow& w) {
  return {{"exists", w.exists}, {"lower", number(w.lower)}, {"upper", number(w.upper)}};
}

Json to_json(const GammaCurve& curve, const std::vector<std::string>& witnesses) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const GammaPoint& p = curve.points[i];
    Json j{{"c", p.c},
           {"gamma", number(p.gamma)},
           {"best_energy", number(p.best_energy)},
           {"status", to_string(p.status)},
           {"witness", i < witnesses.size() ? witnesses[i] : "no-minimizer-evidence"}};
    if (p.energy) j["energy"] = to_json(*p.energy);
    pts.push_back(std::move(j));
  }
  Json second = Json::array();
  for (double d : curve.second_differences()) second.push_back(number(d));
  return {{"masses", curve.masses},
          {"gammas", curve.gammas},
          {"points", std::move(pts)},
          {"second_differences", std::move(second)},
          {"nonincreasing", curve.nonincreasing(1e-6)},
          {"concave", curve.concave(1e-6)}};
}

Json to_json(const ScanReport& scan) {
  Json j;
  j["best"] = {{"ansatz", to_json(scan.best.g)}, {"E", number(scan.best.E)}};
  if (scan.witness) j["witness"] = {{"ansatz", to_json(scan.witness->g)}, {"E", number(scan.witness->E)}};
  else j["witness"] = nullptr;
  if (scan.refined_witness) {
    j["c_c"] = number(scan.refined_witness->c);
    j["refined_witness"] = to_json(*scan.refined_witness);
    j["window"] = to_json(*scan.refined_window);
    j["summary"] = "negative-energy witness found";
  } else {
    j["c_c"] = nullptr;
    j["refined_witness"] = nullptr;
    j["window"] = nullptr;
    j["summary"] = "no negative-energy witness";
  }
  return j;
}

Json to_json(const ThresholdReport& r) {
  Json j{{"regime", to_string(r.regime)}, {"C1", number(r.C1)}, {"c_a", number(r.c_a)}};
  j["c_c"] = r.c_c ? number(*r.c_c) : Json(nullptr);
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  if (r.c_b)
    j["c_b_estimate"] = {{"c_b", r.c_b->c_b},
                         {"lower", r.c_b->lower},
                         {"upper", r.c_b->upper},
                         {"bisections", r.c_b->bisections},
                         {"epsilon", r.c_b->epsilon}};
  else j["c_b_estimate"] = nullptr;
  j["ordering_ok"] = r.ordering_ok;
  j["note"] = r.note;
  return j;
}

Json to_json(const ScatterReport& r) {
  Json d = Json::array();
  for (double x : r.differences) d.push_back(number(x));
  Json b = Json::array();
  for (double x : r.boundary_mass) b.push_back(number(x));
  return {{"times", r.times},
          {"differences", std::move(d)},
          {"boundary_mass", std::move(b)},
          {"monotone_tail", r.monotone_tail},
          {"boundary_ok", r.boundary_ok},
          {"cauchy_consistent", r.cauchy_consistent},
          {"interpretation", "finite-horizon evidence only; scattering is an asymptotic statement"}};
}

Json to_json(const GNConstant& g) {
  Json j{{"sigma", g.sigma},
         {"value", number(g.value)},
         {"quotient", number(g.quotient)},
         {"method", to_string(g.method)},
         {"residual", number(g.residual)},
         {"iterations", g.iterations}};
  j["cross_check"] = g.cross_check ? number(*g.cross_check) : Json(nullptr);
  return j;
}

namespace {

std::string csv_row(std::initializer_list<double> xs) {
  std::string out;
  for (double x : xs) {
    if (!out.empty()) out += ',';
    out += format_double(x);
  }
  return out + "\n";
}

}  // namespace

std::string trace_csv(const ConservationTrace& t) {
  std::string out = "t,mass,energy,h1norm,l4norm,grad_sq\n";
  for (std::size_t i = 0; i < t.times.size(); ++i)
    out += csv_row({t.times[i], t.mass[i], t.energy[i], t.h1norm[i], t.l4norm[i], t.grad_sq[i]});
  return out;
}

std::string gamma_csv(const GammaCurve& curve) {
  std::string out = "c,gamma,best_energy,status\n";
  for (const auto& p : curve.points) {
    std::string row = csv_row({p.c, p.gamma, p.best_energy});
    row.pop_back();
    out += row + "," + std::string(to_string(p.status)) + "\n";
  }
  return out;
}

std::string scan_csv(const ScanReport& scan) {
  std::string out = "sigma,tau,c,Atilde,Btilde,Ctilde,E\n";
  for (const auto& r : scan.rows)
    out += csv_row({r.g.sigma, r.g.tau, r.g.c, r.coeffs.Atilde, r.coeffs.Btilde, r.coeffs.Ctilde, r.E});
  return out;
}

WaveField random_smooth_field(const Grid3D& grid, std::mt19937_64& rng, int blobs) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WaveField u(grid);
  double min_len = std::min({grid.length(0), grid.length(1), grid.length(2)});
  for (int b = 0; b < blobs; ++b) {
    std::array<double, 3> centre{}, width{}, wave{};
    for (int a = 0; a < 3; ++a) {
      width[a] = min_len * (0.04 + 0.06 * unit(rng));
      centre[a] = grid.length(a) * (unit(rng) - 0.5) * 0.3;
      wave[a] = (unit(rng) - 0.5) * 2.0 / width[a];
    }
    const Complex amp = std::polar(0.5 + unit(rng), 2.0 * std::numbers::pi * unit(rng));
    for (std::size_t k = 0; k < grid.points(2); ++k)
      for (std::size_t j = 0; j < grid.points(1); ++j)
        for (std::size_t i = 0; i < grid.points(0); ++i) {
          const std::array<double, 3> x{grid.coordinate(0, i), grid.coordinate(1, j), grid.coordinate(2, k)};
          double e = 0.0, ph = 0.0;
          for (int a = 0; a < 3; ++a) {
            const double d = (x[a] - centre[a]) / width[a];
            e += d * d;
            ph += wave[a] * x[a];
          }
          u(i, j, k) += amp * std::exp(-0.5 * e) * std::polar(1.0, ph);
        }
  }
  return u;
}

WaveField load_initial_field(const std::string& spec, const Grid3D& grid) {
  const std::string prefix = "gaussian:";
  if (spec.rfind(prefix, 0) == 0) {
    std::stringstream ss(spec.substr(prefix.size()));
    std::array<double, 3> v{};
    char comma = 0;
    ss >> v[0] >> comma >> v[1] >> comma >> v[2];
    if (!ss || !(v[0] > 0.0) || !(v[1] > 0.0) || !(v[2] >= 0.0))
      throw ConfigError({Violation{"schema", "initial field must be gaussian:sigma,tau,c with positive entries"}});
    return sample_gaussian(grid, GaussianAnsatz{v[0], v[1], v[2]});
  }
  WaveField u = read_snapshot(spec);
  if (!(u.grid() == grid)) throw ConfigError({Violation{"grid", "snapshot grid differs from the configured grid"}});
  return u;
}

namespace {

struct CommonOptions {
  std::string params_path;
  std::string out;
  std::vector<std::size_t> n;
  std::vector<double> L;
  std::optional<double> cutoff;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--params", o.params_path, "JSON configuration or parameter file")->required();
  cmd->add_option("--out", o.out, "output directory (default: output_dir of the configuration)");
  cmd->add_option("--n", o.n, "grid points (one value or three)")->expected(1, 3);
  cmd->add_option("--L", o.L, "box length (one value or three)")->expected(1, 3);
  cmd->add_option("--cutoff", o.cutoff, "dipolar truncation radius (0: min(L)/2)");
}

RunConfig resolve(const CommonOptions& o) {
  RunConfig cfg = load_config(o.params_path);
  std::array<std::size_t, 3> n = cfg.grid.points();
  std::array<double, 3> L = cfg.grid.length();
  if (!o.n.empty()) n = o.n.size() == 3 ? std::array{o.n[0], o.n[1], o.n[2]} : std::array{o.n[0], o.n[0], o.n[0]};
  if (!o.L.empty()) L = o.L.size() == 3 ? std::array{o.L[0], o.L[1], o.L[2]} : std::array{o.L[0], o.L[0], o.L[0]};
  std::vector<Violation> v;
  if (std::any_of(n.begin(), n.end(), [](std::size_t k) { return k < 2 || k % 2 != 0; }))
    v.push_back({"grid", "grid.n must be even and at least 2 on every axis"});
  if (std::any_of(L.begin(), L.end(), [](double x) { return !(x > 0.0) || !std::isfinite(x); }))
    v.push_back({"grid", "grid.L must be positive on every axis"});
  if (o.cutoff) {
    if (!(*o.cutoff >= 0.0)) v.push_back({"grid", "grid.cutoff must be nonnegative (0 selects min(L)/2)"});
    cfg.dipolar.cutoff = *o.cutoff;
    cfg.propagation.dipolar = cfg.dipolar;
  }
  if (!v.empty()) throw ConfigError(v);
  cfg.grid = Grid3D(n, L);
  if (!o.out.empty()) cfg.output_dir = o.out;
  return cfg;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError({Violation{"schema", "not a number in list: \"" + item + "\""}});
    }
  }
  return out;
}

// "lo,hi,count" for a log-spaced axis.
std::vector<double> parse_axis(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 3 || !(v[0] > 0.0) || !(v[1] >= v[0]) || v[2] < 1)
    throw ConfigError({Violation{"schema", "axis must be lo,hi,count with 0 < lo <= hi"}});
  return log_space(v[0], v[1], static_cast<std::size_t>(v[2]));
}

ExitCode status_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return ExitCode::ok;
    case SolveStatus::spreading: return ExitCode::spreading_detected;
    default: return ExitCode::non_convergence;
  }
}

int cmd_ground_state(const CommonOptions& o, double c, std::ostream& log) {
  const RunConfig cfg = resolve(o);
  if (!(c > 0.0)) throw ConfigError({Violation{"schema", "--c must be positive"}});
  const EnergyModel model(cfg.grid, cfg.params, cfg.dipolar);
  SolverConfig solver = cfg.solver;
  if (solver.restarts.empty()) solver.restarts = default_restarts(cfg.params, c, cfg.grid);
  const SolveResult r = minimize_on_sphere(c, model, solver);
  ArtifactWriter w(cfg.output_dir);
  w.write("field.edgp", encode_snapshot(r.field));
  Json e{{"c", c}, {"params", to_json(cfg.params)}, {"energy", to_json(r.energy)}};
  w.write("energy.json", e.dump(2) + "\n");
  Json d{{"status", to_string(r.status)},
         {"iterations", r.iterations},
         {"energy_monotone", r.energy_monotone},
         {"chemical_potential", to_json(r.chemical)}};
  if (r.energy.E < 0.0) d["qualitative"] = to_json(qualitative_diagnostics(r.field));
  w.write("diagnostics.json", d.dump(2) + "\n");
  w.write("config.json", dump_config(cfg) + "\n");
  w.finalize("ground-state");
  log << "ground-state: " << to_string(r.status) << " E = " << format_double(r.energy.E)
      << " Q = " << format_double(r.energy.Q) << "\n";
  return static_cast<int>(status_code(r.status));
}

int cmd_gamma_curve(const CommonOptions& o, const std::string& list, std::ostream& log) {
  const RunConfig cfg = resolve(o);
  auto masses = parse_list(list);
  std::sort(masses.begin(), masses.end());
  if (masses.empty() || !(masses.front() > 0.0)) throw ConfigError({Violation{"schema", "--c-list needs positive masses"}});
  const EnergyModel model(cfg.grid, cfg.params, cfg.dipolar);
  const GammaCurve curve = gamma_curve(masses, model, cfg.solver);
  ArtifactWriter w(cfg.output_dir);
  std::vector<std::string> witnesses;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    if (p.minimizer_evidence && p.field) {
      const std::string name = "minimizer_" + std::to_string(i) + ".edgp";
      w.write(name, encode_snapshot(*p.field));
      witnesses.push_back(name);
    } else {
      witnesses.push_back("no-minimizer-evidence");
    }
  }
  w.write("gamma_curve.csv", gamma_csv(curve));
  w.write("gamma_curve.json", to_json(curve, witnesses).dump(2) + "\n");
  w.finalize("gamma-curve");
  log << "gamma-curve: " << curve.points.size() << " masses, nonincreasing " << curve.nonincreasing(1e-6)
      << ", concave " << curve.concave(1e-6) << "\n";
  return 0;
}

int cmd_gaussian_scan(const CommonOptions& o, const std::string& sigma, const std::string& tau, const std::string& c,
                      bool sqrt_shape, std::ostream& log) {
  const RunConfig cfg = resolve(o);
  ScanSpec spec = default_threshold_scan(cfg.params);
  if (!sigma.empty()) spec.sigma = parse_axis(sigma);
  if (!tau.empty()) spec.tau = parse_axis(tau);
  if (!c.empty()) spec.c = parse_axis(c);
  spec.sqrt_shape = sqrt_shape;
  const ScanReport scan = gaussian_scan(cfg.params, spec, true);
  ArtifactWriter w(cfg.output_dir);
  w.write("scan.csv", scan_csv(scan));
  Json j = to_json(scan);
  j["params"] = to_json(cfg.params);
  w.write("scan.json", j.dump(2) + "\n");
  w.finalize("gaussian-scan");
  log << "gaussian-scan: " << j["summary"].get<std::string>() << "\n";
  return 0;
}

int cmd_evolve(const CommonOptions& o, const std::string& init, std::optional<double> dt, std::optional<double> t_end,
               bool experimental, std::ostream& log) {
  RunConfig cfg = resolve(o);
  if (dt) cfg.propagation.dt = *dt;
  if (t_end) cfg.propagation.t_end = *t_end;
  cfg.propagation.experimental = cfg.propagation.experimental || experimental;
  const WaveField psi0 = load_initial_field(init, cfg.grid);
  const PropagationResult r = propagate(psi0, cfg.params, cfg.propagation);
  ArtifactWriter w(cfg.output_dir);
  w.write("trace.csv", trace_csv(r.trace));
  for (std::size_t i = 0; i < r.snapshots.size(); ++i)
    w.write("snapshot_" + std::to_string(i) + ".edgp", encode_snapshot(r.snapshots[i].field));
  w.write("final.edgp", encode_snapshot(r.final_field));
  w.write("config.json", dump_config(cfg) + "\n");
  w.finalize("evolve");
  log << "evolve: mass drift " << format_double(r.trace.max_relative_mass_drift()) << ", energy drift "
      << format_double(r.trace.max_relative_energy_drift()) << "\n";
  return 0;
}

int cmd_scatter(const CommonOptions& o, const std::string& init, std::optional<double> dt, double t_min, double t_max,
                int count, std::ostream& log) {
  RunConfig cfg = resolve(o);
  if (dt) cfg.propagation.dt = *dt;
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2)
    throw ConfigError({Violation{"schema", "scatter needs 0 < t-min < t-max and count >= 2"}});
  const WaveField psi0 = load_initial_field(init, cfg.grid);
  const ScatterReport r = scattering_diagnostic(psi0, cfg.params, cfg.propagation, log_space(t_min, t_max, count));
  ArtifactWriter w(cfg.output_dir);
  w.write("scatter.json", to_json(r).dump(2) + "\n");
  if (r.psi_plus) w.write("psi_plus.edgp", encode_snapshot(*r.psi_plus));
  w.finalize("scatter");
  log << "scatter: cauchy_consistent = " << r.cauchy_consistent << "\n";
  return 0;
}

int cmd_thresholds(const CommonOptions& o, bool skip_cb, std::ostream& log) {
  const RunConfig cfg = resolve(o);
  ThresholdConfig tc;
  tc.grid = cfg.grid;
  tc.dipolar = cfg.dipolar;
  tc.solver = cfg.solver;
  tc.estimate_cb = !skip_cb;
  const ThresholdReport r = threshold_report(cfg.params, tc);
  ArtifactWriter w(cfg.output_dir);
  Json j = to_json(r);
  j["params"] = to_json(cfg.params);
  w.write("thresholds.json", j.dump(2) + "\n");
  w.finalize("thresholds");
  log << "thresholds: c_a = " << format_double(r.c_a) << ", ordering_ok = " << r.ordering_ok << "\n";
  return 0;
}

int cmd_verify(const std::string& params_path, const std::string& out, std::ostream& log) {
  RunConfig cfg = params_path.empty() ? parse_config(R"({"params": {"lambda1": 0, "lambda2": 1}})")
                                      : load_config(params_path);
  if (!out.empty()) cfg.output_dir = out;
  const auto checks = run_verify(cfg, log);
  bool ok = true;
  Json arr = Json::array();
  for (const auto& c : checks) {
    ok = ok && c.pass;
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  if (!out.empty()) {
    ArtifactWriter w(cfg.output_dir);
    w.write("verify.json", Json{{"checks", arr}, {"pass", ok}}.dump(2) + "\n");
    w.finalize("verify");
  }
  return ok ? 0 : static_cast<int>(ExitCode::failure);
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Extended dipolar Gross-Pitaevskii toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "thread cap (overrides EDGPE_THREADS)");

  CommonOptions gs_o, gc_o, scan_o, ev_o, sc_o, th_o;
  double gs_c = 1.0;
  auto* gs = app.add_subcommand("ground-state", "constrained minimizer at one mass");
  add_common(gs, gs_o);
  gs->add_option("--c", gs_c, "mass")->required();

  std::string c_list;
  auto* gc = app.add_subcommand("gamma-curve", "estimated gamma(c) over a list of masses");
  add_common(gc, gc_o);
  gc->add_option("--c-list", c_list, "comma-separated masses")->required();

  std::string ax_sigma, ax_tau, ax_c;
  bool sqrt_shape = false;
  auto* scan = app.add_subcommand("gaussian-scan", "closed-form Gaussian ansatz energies");
  add_common(scan, scan_o);
  scan->add_option("--sigma", ax_sigma, "lo,hi,count");
  scan->add_option("--tau", ax_tau, "lo,hi,count");
  scan->add_option("--c", ax_c, "lo,hi,count");
  scan->add_flag("--sqrt-shape", sqrt_shape, "tie sigma to sqrt(tau)");

  std::string ev_init;
  std::optional<double> ev_dt, ev_tend;
  bool experimental = false;
  auto* ev = app.add_subcommand("evolve", "split-step propagation with conservation trace");
  add_common(ev, ev_o);
  ev->add_option("--init", ev_init, "snapshot path or gaussian:sigma,tau,c")->required();
  ev->add_option("--dt", ev_dt, "time step");
  ev->add_option("--t-end", ev_tend, "final time");
  ev->add_flag("--experimental", experimental, "allow p = 6");

  std::string sc_init;
  std::optional<double> sc_dt;
  double t_min = 1.0, t_max = 100.0;
  int count = 11;
  auto* sc = app.add_subcommand("scatter", "Cauchy diagnostic for v(t) = U(-t) psi(t)");
  add_common(sc, sc_o);
  sc->add_option("--init", sc_init, "snapshot path or gaussian:sigma,tau,c")->required();
  sc->add_option("--dt", sc_dt, "time step");
  sc->add_option("--t-min", t_min, "first time of the log grid");
  sc->add_option("--t-max", t_max, "last time of the log grid");
  sc->add_option("--count", count, "number of log-spaced times");

  bool skip_cb = false;
  auto* th = app.add_subcommand("thresholds", "c_a, c_c and the bisection estimate of c_b");
  add_common(th, th_o);
  th->add_flag("--no-cb", skip_cb, "skip the bisection on the grid");

  std::string vf_params, vf_out;
  auto* vf = app.add_subcommand("verify", "quick invariant suite of every module");
  vf->add_option("--params", vf_params, "JSON configuration or parameter file");
  vf->add_option("--out", vf_out, "write verify.json and a manifest here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return static_cast<int>(ExitCode::usage);
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*gs) return cmd_ground_state(gs_o, gs_c, std::cout);
    if (*gc) return cmd_gamma_curve(gc_o, c_list, std::cout);
    if (*scan) return cmd_gaussian_scan(scan_o, ax_sigma, ax_tau, ax_c, sqrt_shape, std::cout);
    if (*ev) return cmd_evolve(ev_o, ev_init, ev_dt, ev_tend, experimental, std::cout);
    if (*sc) return cmd_scatter(sc_o, sc_init, sc_dt, t_min, t_max, count, std::cout);
    if (*th) return cmd_thresholds(th_o, skip_cb, std::cout);
    if (*vf) return cmd_verify(vf_params, vf_out, std::cout);
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations()) std::cerr << "config error [" << v.code << "]: " << v.message << "\n";
    return static_cast<int>(ExitCode::config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::failure);
  }
  std::cerr << app.help();
  return static_cast<int>(ExitCode::usage);
}

}  // namespace edgpe
