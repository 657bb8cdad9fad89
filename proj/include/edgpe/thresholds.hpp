#pragma once

#include <optional>
#include <string>

#include "edgpe/ground_state.hpp"

namespace edgpe {

enum class GNMethod { ode_ground_state, direct_maximization };

std::string_view to_string(GNMethod m);

// Optimal constant of ||u||_{2s+2}^{2s+2} <= C^{2s+2} ||grad u||_2^{3s} ||u||_2^{2-s}.
struct GNConstant {
  double sigma = 1.0;
  double value = 0.0;     // C
  double quotient = 0.0;  // sup of the Weinstein quotient, C^{2s+2}
  GNMethod method = GNMethod::direct_maximization;
  // Direct method: fixed-point defect at the optimum.
  // Shooting: relative mismatch of the identity ||grad Q||^2 / ||Q||^2 = 3s / (2 - s).
  double residual = 0.0;
  int iterations = 0;
  // Value from the other method, when it was run.
  std::optional<double> cross_check;
};

struct GNOptions {
  std::size_t points = 64;
  double length = 12.0;
  int max_iters = 5000;
  // Stop once the fixed-point defect (relative update and Nehari ratio) drops below this.
  double tol = 1e-12;
  bool shooting_cross_check = true;
};

// Weinstein quotient ||u||_{2s+2}^{2s+2} / (||grad u||^{3s} ||u||^{2-s}) on the grid.
double weinstein_quotient(const WaveField& u, double sigma);

// Radial shooting for -Lap Q + Q = Q^{2s+1}, then the quotient of Q by quadrature.
// Throws ShootingError when the initial-value bracket cannot be established.
GNConstant gn_constant_shooting(double sigma);

// Direct maximization: generalized Gaussians exp(-(r/s)^q) searched over q, then
// Petviashvili iteration on the grid to the optimizer, whose quotient is reported. Reports this value, with
// the shooting value as cross-check when requested.
GNConstant gn_constant(double sigma, const GNOptions& options = {});

struct ThresholdConfig {
  Grid3D grid = Grid3D::cubic(64, 16.0);
  DipolarOptions dipolar;
  SolverConfig solver;
  ScanSpec scan;
  GNOptions gn;
  // Known constant C1; computed when absent.
  std::optional<double> C1;
  double rel_width = 0.05;
  // Lower end of the bisection; defaults to max(c_a, c_c / 4).
  std::optional<double> c_lo;
  bool estimate_cb = true;
};

struct ThresholdReport {
  Regime regime = Regime::A1;
  double C1 = 0.0;
  double c_a = 0.0;
  std::optional<double> c_c;
  std::optional<GaussianAnsatz> witness;
  std::optional<CriticalMassEstimate> c_b;
  bool ordering_ok = false;
  std::string note;
};

// c_a from the closed form, c_c from the Gaussian scan, c_b by bisection on the
// grid. Regimes A1 and A2 give the trivial report c_a = infinity.
ThresholdReport threshold_report(const ModelParams& params, const ThresholdConfig& config);

// Default shape grid for the witness scan in the given regime.
ScanSpec default_threshold_scan(const ModelParams& params);

}  // namespace edgpe
