#include <cmath>
#include <numbers>

#include "edgpe/dipolar.hpp"
#include "edgpe/kernels.hpp"
#include "edgpe/spectral.hpp"

namespace edgpe {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<Complex> density_spectrum(const WaveField& u, const SpectralContext& ctx) {
  std::vector<Complex> rho(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) rho[i] = std::norm(u.values()[i]);
  ctx.forward_dft(rho, rho);
  return rho;
}

ConfigError degenerate() {
  return ConfigError(std::vector<Violation>{{"nondegeneracy", "nondegeneracy: lambda1 and lambda2 must not both vanish"}});
}

}  // namespace

std::vector<Violation> ModelParams::violations() const {
  std::vector<Violation> out;
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2) || !std::isfinite(lambda3) || !std::isfinite(p))
    out.push_back({"non_finite", "model coefficients must be finite"});
  if (!(lambda3 > 0.0)) out.push_back({"lambda3_positive", "lambda3 must be > 0"});
  if (!(p > 4.0 && p <= 6.0)) out.push_back({"p_range", "p out of (4,6]"});
  if (lambda1 == 0.0 && lambda2 == 0.0)
    out.push_back({"nondegeneracy", "nondegeneracy: lambda1 and lambda2 must not both vanish"});
  if (trap) {
    if (!(trap->ratio1 > 0.0) || !(trap->ratio2 > 0.0) || !std::isfinite(trap->ratio1) ||
        !std::isfinite(trap->ratio2))
      out.push_back({"trap_ratio", "trap frequency ratios must be positive and finite"});
  }
  return out;
}

void ModelParams::validate() const {
  auto v = violations();
  if (!v.empty()) throw ConfigError(std::move(v));
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::A1: return "A1";
    case Regime::A2: return "A2";
    case Regime::A3: return "A3";
    case Regime::A4: return "A4";
  }
  return "?";
}

double khat(const std::array<double, 3>& xi) {
  const double s = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  if (s == 0.0) return 0.0;
  return (4.0 * pi / 3.0) * (2.0 * xi[2] * xi[2] - xi[0] * xi[0] - xi[1] * xi[1]) / s;
}

double xi_bound(const ModelParams& params) {
  if (params.lambda1 == 0.0 && params.lambda2 == 0.0)
    throw degenerate();
  const double lo = std::abs(params.lambda1 - params.lambda2 * 4.0 * pi / 3.0);
  const double hi = std::abs(params.lambda1 + params.lambda2 * 8.0 * pi / 3.0);
  return std::max(lo, hi);
}

Regime classify_regime(const ModelParams& params) {
  if (params.lambda1 == 0.0 && params.lambda2 == 0.0)
    throw degenerate();
  const double l1 = params.lambda1;
  const double l2 = params.lambda2;
  if (l2 >= 0.0) return (l1 - 4.0 * pi / 3.0 * l2 >= 0.0) ? Regime::A1 : Regime::A3;
  return (l1 + 8.0 * pi / 3.0 * l2 >= 0.0) ? Regime::A2 : Regime::A4;
}

double b_functional(const WaveField& u, const ModelParams& params, DipolarKernel kernel) {
  const auto ctx = SpectralContext::for_grid(u.grid());
  const auto spec = density_spectrum(u, *ctx);
  const auto& kh = ctx->dipolar_multiplier(kernel);
  double s = kernels::sum_norm_sq(spec) * params.lambda1;
  if (params.lambda2 != 0.0) s += params.lambda2 * kernels::sum_weighted_norm_sq(spec, kh);
  return u.grid().cell_volume() / static_cast<double>(u.size()) * s;
}

std::vector<double> convolution_potential(const WaveField& u, DipolarKernel kernel) {
  const auto ctx = SpectralContext::for_grid(u.grid());
  auto spec = density_spectrum(u, *ctx);
  kernels::scale_by(spec, ctx->dipolar_multiplier(kernel), 1.0 / static_cast<double>(u.size()));
  ctx->inverse_dft(spec, spec);
  std::vector<double> phi(u.size());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = spec[i].real();
  return phi;
}

WaveField convolution_term(const WaveField& u, DipolarKernel kernel) {
  const auto ctx = SpectralContext::for_grid(u.grid());
  auto spec = density_spectrum(u, *ctx);
  kernels::scale_by(spec, ctx->dipolar_multiplier(kernel), 1.0 / static_cast<double>(u.size()));
  ctx->inverse_dft(spec, spec);
  return WaveField(u.grid(), std::move(spec));
}

EnergySplit energy_split(const WaveField& u, const ModelParams& params, bool strict, DipolarKernel kernel) {
  const auto ctx = SpectralContext::for_grid(u.grid());
  const double h3 = u.grid().cell_volume();
  const double l4 = h3 * kernels::sum_abs_pow(u.values(), 4.0);
  const double lp = h3 * kernels::sum_abs_pow(u.values(), params.p);
  const double c3 = strict ? 1.0 : params.lambda3;
  EnergySplit out;
  out.E1 = 0.5 * gradient_norm_sq(u) + 0.5 * (params.lambda1 - 4.0 * pi / 3.0 * params.lambda2) * l4 +
           (2.0 / params.p) * c3 * lp;
  if (params.lambda2 != 0.0) {
    const auto spec = density_spectrum(u, *ctx);
    out.E2 = 2.0 * pi * params.lambda2 * h3 / static_cast<double>(u.size()) *
             kernels::sum_weighted_norm_sq(spec, ctx->axial_fraction(kernel));
  }
  return out;
}

std::vector<double> trap_potential(const Grid3D& grid, const ModelParams& params) {
  if (!params.trap) return {};
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.points(2); ++k) {
    const double z = grid.coordinate(2, k);
    for (std::size_t j = 0; j < grid.points(1); ++j) {
      const double y = grid.coordinate(1, j);
      for (std::size_t i = 0; i < grid.points(0); ++i) {
        const double x = grid.coordinate(0, i);
        v[grid.index(i, j, k)] = params.trap->ratio1 * x * x + params.trap->ratio2 * y * y + z * z;
      }
    }
  }
  return v;
}

}  // namespace edgpe
