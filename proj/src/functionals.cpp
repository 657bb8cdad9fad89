#include <cmath>
#include <stdexcept>

#include "edgpe/functionals.hpp"
#include "edgpe/kernels.hpp"
#include "edgpe/resample.hpp"

namespace edgpe {

EnergyModel::EnergyModel(const Grid3D& grid, ModelParams params, DipolarOptions dipolar)
    : grid_(grid), params_(std::move(params)), ctx_(SpectralContext::for_grid(grid)),
      trap_(trap_potential(grid, params_)), dipolar_(dipolar) {
  double& cutoff = dipolar_.cutoff;
  if (cutoff < 0.0 || !std::isfinite(cutoff)) throw std::invalid_argument("dipolar cutoff must be nonnegative");
  if (cutoff == 0.0) cutoff = ctx_->dipolar_cutoff_radius();
  if (dipolar_.kernel == DipolarKernel::periodic)
    multiplier_ = std::shared_ptr<const std::vector<double>>(ctx_, &ctx_->dipolar_multiplier());
  else if (cutoff == ctx_->dipolar_cutoff_radius())
    multiplier_ = std::shared_ptr<const std::vector<double>>(ctx_, &ctx_->dipolar_multiplier(DipolarKernel::truncated));
  else
    multiplier_ = std::make_shared<const std::vector<double>>(truncated_dipolar_multiplier(*ctx_, cutoff));
}

double energy_from(double A, double B, double C, double V, double p) {
  return 0.5 * A + V + 0.5 * B + (2.0 / p) * C;
}

double virial_from(const EnergyBreakdown& e, double p) {
  return e.A + 1.5 * e.B + ((3.0 * p - 6.0) / p) * e.C;
}

namespace {

struct DensityTerms {
  std::vector<double> rho;
  std::vector<Complex> rho_hat;
};

DensityTerms density_terms(const WaveField& u, const SpectralContext& ctx) {
  DensityTerms d;
  d.rho.resize(u.size());
  kernels::density(u.values(), d.rho);
  d.rho_hat.assign(d.rho.begin(), d.rho.end());
  ctx.forward_dft(d.rho_hat, d.rho_hat);
  return d;
}

double quadratic_b(const std::vector<Complex>& rho_hat, const std::vector<double>& multiplier,
                   const ModelParams& p, double h3) {
  double s = p.lambda1 * kernels::sum_norm_sq(rho_hat);
  if (p.lambda2 != 0.0) s += p.lambda2 * kernels::sum_weighted_norm_sq(rho_hat, multiplier);
  return h3 / static_cast<double>(rho_hat.size()) * s;
}

double sum_pow_density(const std::vector<double>& rho, double half_p) {
  double s = 0.0;
  for (double r : rho) s += std::pow(r, half_p);
  return s;
}

double sum_vec(const std::vector<double>& rho) {
  double s = 0.0;
  for (double r : rho) s += r;
  return s;
}

double sum_weighted(const std::vector<double>& rho, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) s += w[i] * rho[i];
  return s;
}

}  // namespace

EnergyBreakdown EnergyModel::energy(const WaveField& u) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("field grid does not match the energy model");
  const double h3 = grid_.cell_volume();
  const double inv_n = 1.0 / static_cast<double>(u.size());
  std::vector<Complex> uh(u.size());
  ctx_->forward_dft(u.values(), uh);
  EnergyBreakdown e;
  e.A = h3 * inv_n * kernels::sum_weighted_norm_sq(uh, ctx_->k_squared());
  const auto d = density_terms(u, *ctx_);
  e.B = quadratic_b(d.rho_hat, *multiplier_, params_, h3);
  e.C = params_.lambda3 * h3 * kernels::sum_abs_pow(u.values(), params_.p);
  e.V = trap_.empty() ? 0.0 : h3 * kernels::sum_weighted_norm_sq(u.values(), trap_);
  e.mass = h3 * kernels::sum_norm_sq(u.values());
  e.E = energy_from(e.A, e.B, e.C, e.V, params_.p);
  e.Q = virial_from(e, params_.p);
  return e;
}

void EnergyModel::local_potential(const WaveField& u, std::vector<double>& w) const {
  const auto d = density_terms(u, *ctx_);
  std::vector<double> phi;
  if (params_.lambda2 != 0.0) {
    std::vector<Complex> spec = d.rho_hat;
    kernels::scale_by(spec, *multiplier_, 1.0 / static_cast<double>(u.size()));
    ctx_->inverse_dft(spec, spec);
    phi.resize(u.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = spec[i].real();
  }
  w.resize(u.size());
  kernels::local_potential(d.rho, phi, trap_,
                           {params_.lambda1, params_.lambda2, params_.lambda3, params_.p}, w);
}

EnergyBreakdown EnergyModel::energy_and_gradient(const WaveField& u, WaveField& gradient) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("field grid does not match the energy model");
  const double h3 = grid_.cell_volume();
  const double inv_n = 1.0 / static_cast<double>(u.size());
  std::vector<Complex> uh(u.size());
  ctx_->forward_dft(u.values(), uh);
  EnergyBreakdown e;
  e.A = h3 * inv_n * kernels::sum_weighted_norm_sq(uh, ctx_->k_squared());
  kernels::scale_by(uh, ctx_->k_squared(), 0.5 * inv_n);
  ctx_->inverse_dft(uh, uh);

  const auto d = density_terms(u, *ctx_);
  e.B = quadratic_b(d.rho_hat, *multiplier_, params_, h3);
  std::vector<double> phi;
  if (params_.lambda2 != 0.0) {
    std::vector<Complex> spec = d.rho_hat;
    kernels::scale_by(spec, *multiplier_, inv_n);
    ctx_->inverse_dft(spec, spec);
    phi.resize(u.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = spec[i].real();
  }
  std::vector<double> w(u.size());
  kernels::local_potential(d.rho, phi, trap_,
                           {params_.lambda1, params_.lambda2, params_.lambda3, params_.p}, w);
  if (!(gradient.grid() == grid_)) gradient = WaveField(grid_);
  kernels::apply_potential(w, u.values(), uh, gradient.values());

  e.C = params_.lambda3 * h3 * sum_pow_density(d.rho, 0.5 * params_.p);
  e.V = trap_.empty() ? 0.0 : h3 * sum_weighted(d.rho, trap_);
  e.mass = h3 * sum_vec(d.rho);
  e.E = energy_from(e.A, e.B, e.C, e.V, params_.p);
  e.Q = virial_from(e, params_.p);
  return e;
}

EnergyBreakdown energy(const WaveField& u, const ModelParams& params, DipolarKernel kernel) {
  return EnergyModel(u.grid(), params, DipolarOptions{kernel, 0.0}).energy(u);
}

double virial(const WaveField& u, const ModelParams& params, DipolarKernel kernel) {
  return energy(u, params, kernel).Q;
}

WaveField energy_gradient(const WaveField& u, const ModelParams& params, DipolarKernel kernel) {
  WaveField g(u.grid());
  EnergyModel(u.grid(), params, DipolarOptions{kernel, 0.0}).energy_and_gradient(u, g);
  return g;
}

ChemicalPotentialReport chemical_potential(const WaveField& u, const ModelParams& params, DipolarKernel kernel) {
  EnergyModel model(u.grid(), params, DipolarOptions{kernel, 0.0});
  WaveField g(u.grid());
  const EnergyBreakdown e = model.energy_and_gradient(u, g);
  if (!(e.mass > 0.0)) throw std::invalid_argument("chemical potential of the zero field is undefined");
  ChemicalPotentialReport r;
  r.beta_pohozaev = (-0.25 * e.B + (params.p - 6.0) / (2.0 * params.p) * e.C) / e.mass;
  r.beta_rayleigh = -(0.5 * e.A + e.B + e.C + e.V) / e.mass;
  kernels::axpy(r.beta_rayleigh, u.values(), g.values());
  r.residual_norm = norm_lp(g, 2.0);
  return r;
}

namespace {

Rescaled rescale(const WaveField& u, const std::array<AxisMap, 3>& maps, double amplitude) {
  ResampleReport report;
  Rescaled out{resample(u, maps, amplitude, &report), {}};
  if (report.clipped_fraction > 1e-6)
    out.warnings.push_back("rescaled field loses " + std::to_string(report.clipped_fraction) +
                           " of its mass outside the box");
  if (report.spectral_tail > 1e-10)
    out.warnings.push_back("rescaled field is under-resolved (spectral tail " +
                           std::to_string(report.spectral_tail) + ")");
  return out;
}

void require_positive(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("scaling parameter must be positive");
}

}  // namespace

Rescaled rescale_mass_preserving(const WaveField& u, double t) {
  require_positive(t);
  if (t == 1.0) return {u, {}};
  return rescale(u, {AxisMap{t, 0.0}, AxisMap{t, 0.0}, AxisMap{t, 0.0}}, std::pow(t, 1.5));
}

Rescaled rescale_c_changing(const WaveField& u, double t, double p) {
  require_positive(t);
  if (t == 1.0) return {u, {}};
  const double a = 1.0 / t;
  return rescale(u, {AxisMap{a, 0.0}, AxisMap{a, 0.0}, AxisMap{a, 0.0}}, std::pow(t, -3.0 / p));
}

Rescaled rescale_anisotropic(const WaveField& u, double t) {
  require_positive(t);
  if (t == 1.0) return {u, {}};
  return rescale(u, {AxisMap{t, 0.0}, AxisMap{t, 0.0}, AxisMap{std::sqrt(t), 0.0}}, std::pow(t, 1.25));
}

}  // namespace edgpe
