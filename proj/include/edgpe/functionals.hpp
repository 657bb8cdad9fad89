#pragma once

#include <memory>
#include <string>
#include <vector>

#include "edgpe/dipolar.hpp"
#include "edgpe/grid.hpp"
#include "edgpe/spectral.hpp"

namespace edgpe {

struct EnergyBreakdown {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;  // lambda3 ||u||_p^p
  double V = 0.0;  // int V_ext |u|^2
  double E = 0.0;
  double Q = 0.0;
  double mass = 0.0;
};

struct ChemicalPotentialReport {
  double beta_pohozaev = 0.0;
  double beta_rayleigh = 0.0;
  double residual_norm = 0.0;
};

// Energy and gradient evaluation bound to one grid and parameter set. Holds
// the trap samples and the shared transform context; immutable after
// construction, so one instance may serve concurrent callers.
class EnergyModel {
 public:
  EnergyModel(const Grid3D& grid, ModelParams params, DipolarOptions dipolar = {});

  const Grid3D& grid() const noexcept { return grid_; }
  const ModelParams& params() const noexcept { return params_; }
  const SpectralContext& context() const noexcept { return *ctx_; }
  const std::vector<double>& trap() const noexcept { return trap_; }
  // Dipolar treatment with the cutoff resolved to its actual radius.
  const DipolarOptions& dipolar() const noexcept { return dipolar_; }
  const std::vector<double>& multiplier() const noexcept { return *multiplier_; }

  EnergyBreakdown energy(const WaveField& u) const;
  // Energy plus G(u) = -1/2 Lap u + V u + l1|u|^2 u + l2 (K*|u|^2) u + l3 |u|^{p-2} u.
  EnergyBreakdown energy_and_gradient(const WaveField& u, WaveField& gradient) const;
  // W = V + l1|u|^2 + l2 K*|u|^2 + l3|u|^{p-2}, the pointwise potential of the flow.
  void local_potential(const WaveField& u, std::vector<double>& w) const;

 private:
  Grid3D grid_;
  ModelParams params_;
  std::shared_ptr<const SpectralContext> ctx_;
  std::vector<double> trap_;
  DipolarOptions dipolar_;
  std::shared_ptr<const std::vector<double>> multiplier_;
};

EnergyBreakdown energy(const WaveField& u, const ModelParams& params,
                       DipolarKernel kernel = DipolarKernel::truncated);
double virial(const WaveField& u, const ModelParams& params, DipolarKernel kernel = DipolarKernel::truncated);
WaveField energy_gradient(const WaveField& u, const ModelParams& params,
                          DipolarKernel kernel = DipolarKernel::truncated);
// Throws std::invalid_argument for a zero field.
ChemicalPotentialReport chemical_potential(const WaveField& u, const ModelParams& params,
                                           DipolarKernel kernel = DipolarKernel::truncated);

// Q = A + 3/2 B + (3p - 6)/p C.
double virial_from(const EnergyBreakdown& e, double p);
// E = 1/2 A + V + 1/2 B + 2/p C.
double energy_from(double A, double B, double C, double V, double p);

struct Rescaled {
  WaveField field;
  std::vector<std::string> warnings;
};

// u^t(x) = t^{3/2} u(t x).
Rescaled rescale_mass_preserving(const WaveField& u, double t);
// (t)u(x) = t^{-3/p} u(x / t).
Rescaled rescale_c_changing(const WaveField& u, double t, double p);
// u_t(x) = t^{5/4} u(t x1, t x2, sqrt(t) x3).
Rescaled rescale_anisotropic(const WaveField& u, double t);

}  // namespace edgpe
