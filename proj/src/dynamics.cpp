#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edgpe/dynamics.hpp"
#include "edgpe/errors.hpp"
#include "edgpe/kernels.hpp"

namespace edgpe {

double ConservationTrace::max_relative_mass_drift() const {
  double worst = 0.0;
  if (mass.empty() || mass.front() == 0.0) return 0.0;
  for (double m : mass) worst = std::max(worst, std::abs(m - mass.front()) / mass.front());
  return worst;
}

double ConservationTrace::max_relative_energy_drift() const {
  double worst = 0.0;
  if (energy.empty() || energy.front() == 0.0) return 0.0;
  for (double e : energy) worst = std::max(worst, std::abs(e - energy.front()) / std::abs(energy.front()));
  return worst;
}

StrangPropagator::StrangPropagator(const EnergyModel& model, double dt)
    : model_(model), dt_(dt), kinetic_phase_(model.grid().size()) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto& k2 = model.context().k_squared();
  const double inv_n = 1.0 / static_cast<double>(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) kinetic_phase_[i] = std::polar(inv_n, -0.5 * dt * k2[i]);
}

void StrangPropagator::nonlinear(WaveField& psi, double dt) const {
  std::vector<double> w;
  model_.local_potential(psi, w);
  kernels::rotate_phase(psi.values(), w, dt);
}

void StrangPropagator::kinetic(WaveField& psi) const {
  const auto& ctx = model_.context();
  auto v = psi.values();
  ctx.forward_dft(v, v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= kinetic_phase_[i];
  ctx.inverse_dft(v, v);
}

void StrangPropagator::step(WaveField& psi) const { advance(psi, 1); }

void StrangPropagator::advance(WaveField& psi, int steps) const {
  if (steps <= 0) return;
  nonlinear(psi, 0.5 * dt_);
  for (int s = 0; s < steps; ++s) {
    kinetic(psi);
    nonlinear(psi, s + 1 < steps ? dt_ : 0.5 * dt_);
  }
}

WaveField strang_step(const WaveField& psi, double dt, const ModelParams& params) {
  EnergyModel model(psi.grid(), params);
  StrangPropagator prop(model, dt);
  WaveField out = psi;
  prop.step(out);
  return out;
}

WaveField free_propagate(const WaveField& psi, double t) {
  const auto ctx = SpectralContext::for_grid(psi.grid());
  WaveField out = psi;
  auto v = out.values();
  ctx->forward_dft(v, v);
  const auto& k2 = ctx->k_squared();
  const double inv_n = 1.0 / static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::polar(inv_n, -0.5 * t * k2[i]);
  ctx->inverse_dft(v, v);
  return out;
}

namespace {

void check_propagation_params(const ModelParams& params, const PropagationConfig& config) {
  if (params.p == 6.0 && !config.experimental)
    throw std::invalid_argument("p = 6 propagation is experimental and must be enabled explicitly");
  if (!(config.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (config.snapshot_stride <= 0) throw std::invalid_argument("snapshot stride must be positive");
}

void record(ConservationTrace& tr, double t, const EnergyBreakdown& e, const WaveField& psi) {
  tr.times.push_back(t);
  tr.mass.push_back(e.mass);
  tr.energy.push_back(e.E);
  tr.h1norm.push_back(std::sqrt(e.mass + e.A));
  tr.l4norm.push_back(norm_lp(psi, 4.0));
  tr.grad_sq.push_back(e.A);
}

}  // namespace

PropagationResult propagate(const WaveField& psi0, const ModelParams& params, const PropagationConfig& config) {
  check_propagation_params(params, config);
  if (!psi0.is_finite()) throw NumericalOverflow("initial field is not finite");
  const EnergyModel model(psi0.grid(), params, config.dipolar);
  const StrangPropagator prop(model, config.dt);
  PropagationResult out{psi0, {}, {}};
  WaveField& psi = out.final_field;
  const EnergyBreakdown e0 = model.energy(psi);
  record(out.trace, 0.0, e0, psi);
  if (config.keep_snapshots) out.snapshots.push_back({0.0, psi});
  const long total = std::lround(config.t_end / config.dt);
  const double escale = std::max(std::abs(e0.E), 1e-300);
  long done = 0;
  while (done < total) {
    const int chunk = static_cast<int>(std::min<long>(config.snapshot_stride, total - done));
    prop.advance(psi, chunk);
    done += chunk;
    if (!psi.is_finite()) throw NumericalOverflow("propagation produced non-finite values");
    const EnergyBreakdown e = model.energy(psi);
    const double t = static_cast<double>(done) * config.dt;
    record(out.trace, t, e, psi);
    if (config.keep_snapshots) out.snapshots.push_back({t, psi});
    const double mdrift = e0.mass > 0.0 ? std::abs(e.mass - e0.mass) / e0.mass : 0.0;
    const double edrift = std::abs(e.E - e0.E) / escale;
    if (mdrift > config.conserve_tol_mass)
      throw UnderResolved("mass drift " + std::to_string(mdrift) + " exceeds tolerance at t = " + std::to_string(t));
    if (edrift > config.conserve_tol_energy)
      throw UnderResolved("energy drift " + std::to_string(edrift) + " exceeds tolerance at t = " + std::to_string(t));
  }
  return out;
}

AprioriBounds apriori_bounds(const ModelParams& params, double energy0, double mass0, double C1) {
  if (!(mass0 > 0.0)) return {};
  const double xi = xi_bound(params);
  const double p = params.p;
  const double a = 1.0 / (2.0 * std::pow(C1, 8.0 / 3.0) * std::pow(mass0, 1.0 / 3.0));
  const double b = 2.0 * params.lambda3 / (p * std::pow(mass0, 0.5 * (p - 4.0)));
  auto F = [&](double y) {
    return a * std::pow(y, 8.0 / 3.0) - 0.5 * xi * std::pow(y, 4.0) + b * std::pow(y, 2.0 * (p - 2.0));
  };
  // F grows without bound; the bound is the largest y with F(y) <= E0.
  double hi = 1.0;
  while (F(hi) <= energy0) hi *= 2.0;
  double y = hi;
  const int samples = 4000;
  for (int i = samples; i >= 0; --i) {
    const double cand = hi * i / samples;
    if (F(cand) <= energy0) {
      y = std::min(hi, cand + hi / samples);
      break;
    }
  }
  AprioriBounds out;
  out.l4 = y;
  out.grad_sq = 2.0 * energy0 + xi * std::pow(y, 4.0);
  return out;
}

ScatterReport scattering_diagnostic(const WaveField& psi0, const ModelParams& params, const PropagationConfig& config,
                                    const std::vector<double>& times, double boundary_tol) {
  if (params.trap) throw std::invalid_argument("scattering diagnostic requires V_ext = 0");
  check_propagation_params(params, config);
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1])))
      throw std::invalid_argument("scattering times must be positive and ascending");
  const EnergyModel model(psi0.grid(), params, config.dipolar);
  const StrangPropagator prop(model, config.dt);
  ScatterReport rep;
  WaveField psi = psi0;
  std::optional<WaveField> prev;
  long done = 0;
  for (double t : times) {
    const long target = std::lround(t / config.dt);
    if (target > done) prop.advance(psi, static_cast<int>(target - done));
    done = std::max(done, target);
    if (!psi.is_finite()) throw NumericalOverflow("propagation produced non-finite values");
    const double tk = static_cast<double>(done) * config.dt;
    WaveField v = free_propagate(psi, -tk);
    rep.times.push_back(tk);
    rep.boundary_mass.push_back(boundary_mass_fraction(psi));
    if (prev) {
      WaveField diff = v;
      diff -= *prev;
      rep.differences.push_back(h1_norm(diff));
    }
    prev = std::move(v);
  }
  const auto& d = rep.differences;
  if (d.size() >= 5) {
    rep.monotone_tail = true;
    for (std::size_t k = d.size() - 4; k < d.size(); ++k)
      if (!(d[k] < d[k - 1] || (d[k] == 0.0 && d[k - 1] == 0.0))) rep.monotone_tail = false;
  }
  rep.boundary_ok = std::all_of(rep.boundary_mass.begin(), rep.boundary_mass.end(),
                                [&](double b) { return b <= boundary_tol; });
  rep.cauchy_consistent = rep.monotone_tail && rep.boundary_ok;
  rep.psi_plus = prev;
  return rep;
}

}  // namespace edgpe
