#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "edgpe/errors.hpp"
#include "edgpe/ground_state.hpp"
#include "edgpe/kernels.hpp"
#include "edgpe/resample.hpp"

namespace edgpe {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::not_converged: return "not_converged";
    case SolveStatus::spreading: return "spreading";
  }
  return "?";
}

namespace {

double re_inner(const WaveField& a, const WaveField& b) { return inner_product(a, b).real(); }

void normalize_to(WaveField& u, double c) {
  const double m = mass(u);
  if (!(m > 0.0)) throw std::invalid_argument("cannot normalize the zero field");
  u *= std::sqrt(c / m);
}

class Preconditioner {
 public:
  explicit Preconditioner(const EnergyModel& model) : model_(model), symbol_(model.grid().size()) {}

  void set_shift(double alpha) {
    if (alpha == alpha_) return;
    alpha_ = alpha;
    const auto& k2 = model_.context().k_squared();
    for (std::size_t i = 0; i < symbol_.size(); ++i) symbol_[i] = 1.0 / (alpha + 0.5 * k2[i]);
  }

  WaveField apply(const WaveField& g) const {
    WaveField out(g.grid());
    const auto& ctx = model_.context();
    ctx.forward_dft(g.values(), out.values());
    kernels::scale_by(out.values(), symbol_, 1.0 / static_cast<double>(g.size()));
    ctx.inverse_dft(out.values(), out.values());
    return out;
  }

 private:
  const EnergyModel& model_;
  std::vector<double> symbol_;
  double alpha_ = -1.0;
};

ChemicalPotentialReport chemical_from(const EnergyBreakdown& e, const WaveField& u, const WaveField& G,
                                      double p) {
  ChemicalPotentialReport r;
  r.beta_pohozaev = (-0.25 * e.B + (p - 6.0) / (2.0 * p) * e.C) / e.mass;
  r.beta_rayleigh = -(0.5 * e.A + e.B + e.C + e.V) / e.mass;
  WaveField res = G;
  kernels::axpy(r.beta_rayleigh, u.values(), res.values());
  r.residual_norm = norm_lp(res, 2.0);
  return r;
}

WaveField along(const WaveField& u, const WaveField& dir_unit, double theta) {
  WaveField out = u;
  out *= std::cos(theta);
  kernels::axpy(std::sin(theta), dir_unit.values(), out.values());
  return out;
}

}  // namespace

SolveResult minimize_from(const EnergyModel& model, const WaveField& initial, double c,
                          const SolverConfig& config) {
  if (!(c > 0.0)) throw std::invalid_argument("mass must be positive");
  const double p = model.params().p;
  const double sqc = std::sqrt(c);
  WaveField u = initial;
  normalize_to(u, c);
  WaveField G(u.grid());
  EnergyBreakdown e = model.energy_and_gradient(u, G);

  SolveResult out{u, e, {}, SolveStatus::not_converged, 0, true, {e.E}};
  Preconditioner precond(model);
  WaveField g_prev(u.grid());
  WaveField z_prev(u.grid());
  WaveField d_prev(u.grid());
  bool have_prev = false;
  int stall = 0;
  const double a0 = e.A;

  for (int it = 0; it < config.max_iters; ++it) {
    out.iterations = it;
    const double mu = re_inner(u, G) / c;
    WaveField g = G;
    kernels::axpy(-mu, u.values(), g.values());
    const double gnorm = norm_lp(g, 2.0);
    const double rel_res = gnorm / (std::max(std::abs(mu), 1e-12) * sqc);
    if (rel_res <= config.residual_tol && std::abs(e.Q) <= config.virial_tol * std::max(1.0, e.A)) {
      out.status = SolveStatus::converged;
      break;
    }
    if (it % 10 == 0 && e.E > 0.0 && !model.params().trap &&
        (boundary_mass_fraction(u) > config.spreading_boundary_mass || e.A < 1e-4 * a0)) {
      out.status = SolveStatus::spreading;
      break;
    }
    if (it % 50 == 0) precond.set_shift(std::max(std::abs(mu), 0.05));

    WaveField z = precond.apply(g);
    kernels::axpy(-re_inner(u, z) / c, u.values(), z.values());

    WaveField d = z;
    d *= -1.0;
    if (config.conjugate && have_prev) {
      const double denom = re_inner(g_prev, z_prev);
      double beta = denom > 0.0 ? (re_inner(g, z) - re_inner(g_prev, z)) / denom : 0.0;
      beta = std::max(0.0, beta);
      if (beta > 0.0) {
        WaveField dt = d_prev;
        kernels::axpy(-re_inner(u, dt) / c, u.values(), dt.values());
        kernels::axpy(beta, dt.values(), d.values());
      }
    }
    double slope = re_inner(g, d);
    if (!(slope < 0.0)) {
      d = z;
      d *= -1.0;
      slope = re_inner(g, d);
    }
    const double dnorm = norm_lp(d, 2.0);
    if (!(dnorm > 0.0) || !(slope < 0.0)) break;
    WaveField dir = d;
    dir *= sqc / dnorm;
    const double s0 = 2.0 * sqc / dnorm * slope;  // dE/dtheta at 0

    double theta1 = std::min(0.5, config.dt * dnorm / sqc);
    const double e0 = e.E;
    const double slack = 1e-13 * std::max(1.0, std::abs(e0));
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      const WaveField u1 = along(u, dir, theta1);
      const double e1 = model.energy(u1).E;
      double theta = theta1;
      const double a = (e1 - e0 - s0 * theta1) / (theta1 * theta1);
      if (a > 0.0) theta = std::min(-s0 / (2.0 * a), 4.0 * theta1);
      else if (e1 < e0) theta = 2.0 * theta1;
      WaveField cand = along(u, dir, theta);
      normalize_to(cand, c);
      WaveField Gc(u.grid());
      EnergyBreakdown ec = model.energy_and_gradient(cand, Gc);
      if (e1 < ec.E && theta != theta1) {
        cand = u1;
        normalize_to(cand, c);
        ec = model.energy_and_gradient(cand, Gc);
      }
      if (ec.E <= e0 + slack) {
        if (ec.E > e0) out.energy_monotone = out.energy_monotone && (ec.E - e0 <= 1e-12 * std::max(1.0, std::abs(e0)));
        stall = (std::abs(ec.E - e0) <= config.energy_tol * std::max(1.0, std::abs(e0))) ? stall + 1 : 0;
        g_prev = std::move(g);
        z_prev = std::move(z);
        d_prev = std::move(d);
        have_prev = true;
        u = std::move(cand);
        G = std::move(Gc);
        e = ec;
        accepted = true;
      } else {
        theta1 *= 0.25;
        have_prev = false;
      }
    }
    if (!accepted) break;
    out.energy_history.push_back(e.E);
    if (!u.is_finite()) throw NumericalOverflow("ground-state flow produced non-finite values");
    if (stall >= 25) break;
  }
  out.field = u;
  out.energy = e;
  out.chemical = chemical_from(e, u, G, p);
  if (out.status == SolveStatus::not_converged) {
    const double mu = -out.chemical.beta_rayleigh;
    const double rel = out.chemical.residual_norm / (std::max(std::abs(mu), 1e-12) * sqc);
    if (rel <= config.residual_tol && std::abs(e.Q) <= config.virial_tol * std::max(1.0, e.A))
      out.status = SolveStatus::converged;
  }
  return out;
}

std::vector<GaussianAnsatz> default_restarts(const ModelParams& params, double c, const Grid3D& grid) {
  double lmin = std::min({grid.length(0), grid.length(1)});
  double hmax = std::max({grid.spacing(0), grid.spacing(1), grid.spacing(2)});
  const double wmin = 4.0 * hmax;
  const double smax = lmin / 4.0;
  const double tmax = grid.length(2) / 4.0;
  GaussianAnsatz best{std::min(1.0, smax), std::min(1.0, tmax), c};
  double best_e = std::numeric_limits<double>::infinity();
  for (double s : log_space(wmin, smax, 41))
    for (double t : log_space(wmin, tmax, 41)) {
      const double en = gaussian_energy({s, t, c}, params);
      if (en < best_e) {
        best_e = en;
        best = {s, t, c};
      }
    }
  std::vector<GaussianAnsatz> out{best};
  const double iso = std::clamp(std::cbrt(best.sigma * best.sigma * best.tau), wmin, std::min(smax, tmax));
  out.push_back({iso, iso, c});
  if (params.lambda2 >= 0.0) {
    const double t = std::clamp(2.0 * best.tau, wmin, tmax);
    out.push_back({std::clamp(std::sqrt(t), wmin, smax), t, c});
  } else {
    const double s = std::clamp(2.0 * best.sigma, wmin, smax);
    out.push_back({s, std::clamp(std::sqrt(s), wmin, tmax), c});
  }
  return out;
}

namespace {

bool better(const SolveResult& a, const SolveResult& b) {
  if (a.energy.E < b.energy.E - 1e-10) return true;
  if (a.energy.E > b.energy.E + 1e-10) return false;
  return a.chemical.residual_norm < b.chemical.residual_norm;
}

}  // namespace

SolveResult minimize_on_sphere(double c, const EnergyModel& model, const SolverConfig& config,
                               const std::vector<WaveField>& extra_seeds) {
  const auto restarts = config.restarts.empty() ? default_restarts(model.params(), c, model.grid())
                                                : config.restarts;
  std::optional<SolveResult> best;
  auto consider = [&](SolveResult r) {
    if (!best || better(r, *best)) best = std::move(r);
  };
  for (const auto& g : restarts) {
    GaussianAnsatz seed = g;
    seed.c = c;
    consider(minimize_from(model, sample_gaussian(model.grid(), seed), c, config));
  }
  for (const auto& f : extra_seeds) consider(minimize_from(model, f, c, config));
  if (!best) throw std::invalid_argument("no seeds for the ground-state search");
  return std::move(*best);
}

bool GammaCurve::nonincreasing(double slack) const {
  for (std::size_t i = 1; i < gammas.size(); ++i)
    if (gammas[i] > gammas[i - 1] + slack) return false;
  return true;
}

std::vector<double> GammaCurve::second_differences() const {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < gammas.size(); ++i) {
    const double left = (gammas[i] - gammas[i - 1]) / (masses[i] - masses[i - 1]);
    const double right = (gammas[i + 1] - gammas[i]) / (masses[i + 1] - masses[i]);
    out.push_back(right - left);
  }
  return out;
}

bool GammaCurve::concave(double slack) const {
  for (double d : second_differences())
    if (d > slack) return false;
  return true;
}

namespace {

WaveField rescale_to_mass(const WaveField& u, double from, double to, double p) {
  const double t = std::pow(to / from, 1.0 / (3.0 - 6.0 / p));
  WaveField f = rescale_c_changing(u, t, p).field;
  normalize_to(f, to);
  return f;
}

void adopt(GammaPoint& pt, SolveResult&& r) {
  if (pt.field && !(r.energy.E < pt.best_energy - 1e-12)) return;
  pt.best_energy = r.energy.E;
  pt.status = r.status;
  pt.minimizer_evidence = r.status == SolveStatus::converged && r.energy.E < 0.0;
  pt.gamma = std::min(0.0, r.energy.E);
  pt.energy = r.energy;
  pt.field = std::move(r.field);
}

}  // namespace

GammaCurve gamma_curve(const std::vector<double>& masses, const EnergyModel& model, const SolverConfig& config) {
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] > 0.0)) throw std::invalid_argument("gamma curve masses must be positive");
    if (i > 0 && !(masses[i] > masses[i - 1])) throw std::invalid_argument("gamma curve masses must ascend");
  }
  const double p = model.params().p;
  GammaCurve curve;
  curve.masses = masses;
  curve.points.resize(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    GammaPoint& pt = curve.points[i];
    pt.c = masses[i];
    try {
      std::vector<WaveField> seeds;
      if (i > 0 && curve.points[i - 1].minimizer_evidence)
        seeds.push_back(rescale_to_mass(*curve.points[i - 1].field, masses[i - 1], masses[i], p));
      adopt(pt, minimize_on_sphere(masses[i], model, config, seeds));
    } catch (const std::exception&) {
      pt.valid = false;
    }
  }
  for (std::size_t i = masses.size(); i-- > 1;) {
    const GammaPoint& hi = curve.points[i];
    GammaPoint& pt = curve.points[i - 1];
    if (!hi.minimizer_evidence) continue;
    try {
      adopt(pt, minimize_from(model, rescale_to_mass(*hi.field, masses[i], masses[i - 1], p), masses[i - 1], config));
      pt.valid = true;
    } catch (const std::exception&) {
    }
  }
  for (const auto& pt : curve.points) curve.gammas.push_back(pt.gamma);
  return curve;
}

CriticalMassEstimate estimate_cb(const EnergyModel& model, const SolverConfig& config, double c_lo, double c_hi,
                                 double rel_width, const std::optional<WaveField>& hint,
                                 std::optional<double> epsilon) {
  if (!(c_lo > 0.0) || !(c_hi > c_lo)) throw InvalidBracket("critical-mass bracket must satisfy 0 < c_lo < c_hi");
  const double p = model.params().p;
  std::vector<WaveField> seeds;
  if (hint) seeds.push_back(rescale_to_mass(*hint, mass(*hint), c_hi, p));
  SolveResult top = minimize_on_sphere(c_hi, model, config, seeds);
  if (!(top.energy.E < 0.0))
    throw InvalidBracket("no negative energy found at the upper end of the bracket");
  CriticalMassEstimate est;
  est.epsilon = epsilon.value_or(1e-4 * std::abs(top.energy.E));
  if (!(top.energy.E < -est.epsilon)) throw InvalidBracket("upper end of the bracket fails the predicate");

  auto negative_at = [&](double c, const WaveField& droplet, double droplet_mass, WaveField* out) {
    std::vector<WaveField> s{rescale_to_mass(droplet, droplet_mass, c, p)};
    SolveResult r = minimize_on_sphere(c, model, config, s);
    if (out) *out = r.field;
    return r.energy.E < -est.epsilon;
  };

  WaveField droplet = top.field;
  double droplet_mass = c_hi;
  if (negative_at(c_lo, droplet, droplet_mass, nullptr))
    throw InvalidBracket("lower end of the bracket already has negative energy");

  double lo = c_lo;
  double hi = c_hi;
  while (hi - lo > rel_width * hi && est.bisections < 60) {
    const double mid = 0.5 * (lo + hi);
    WaveField f(model.grid());
    if (negative_at(mid, droplet, droplet_mass, &f)) {
      hi = mid;
      droplet = std::move(f);
      droplet_mass = mid;
    } else {
      lo = mid;
    }
    ++est.bisections;
  }
  est.lower = lo;
  est.upper = hi;
  est.c_b = 0.5 * (lo + hi);
  return est;
}

WaveField reflection_extension(const WaveField& u, int axis, int side, double t) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("reflection axis must be 1, 2 or 3");
  if (side != 1 && side != 2) throw std::invalid_argument("reflection side must be 1 or 2");
  const Grid3D& g = u.grid();
  const int a = axis - 1;
  if (!(std::abs(t) < 0.5 * g.length(a))) throw std::invalid_argument("reflection plane outside the box");
  std::array<AxisMap, 3> maps{};
  maps[a] = AxisMap{-1.0, 2.0 * t};
  const WaveField mirrored = resample(u, maps, 1.0);
  WaveField out(g);
  for (std::size_t k = 0; k < g.points(2); ++k)
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) {
        const std::array<std::size_t, 3> idx{i, j, k};
        const double x = g.coordinate(a, idx[a]);
        const bool keep = side == 1 ? x <= t : x >= t;
        out(i, j, k) = keep ? u(i, j, k) : mirrored(i, j, k);
      }
  return out;
}

double mass_splitting_plane(const WaveField& u, int axis, double fraction) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2 or 3");
  const Grid3D& g = u.grid();
  const int a = axis - 1;
  std::vector<double> plane(g.points(a), 0.0);
  for (std::size_t k = 0; k < g.points(2); ++k)
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) {
        const std::array<std::size_t, 3> idx{i, j, k};
        plane[idx[a]] += std::norm(u(i, j, k));
      }
  double total = 0.0;
  for (double m : plane) total += m;
  const double target = fraction * total;
  // Each plane's mass is spread uniformly over its cell [x_j - h/2, x_j + h/2].
  const double h = g.spacing(a);
  double acc = 0.0;
  for (std::size_t j = 0; j < plane.size(); ++j) {
    if (acc + plane[j] >= target && plane[j] > 0.0)
      return g.coordinate(a, j) - 0.5 * h + h * (target - acc) / plane[j];
    acc += plane[j];
  }
  return g.coordinate(a, plane.size() - 1);
}

}  // namespace edgpe
