#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edgpe/functionals.hpp"
#include "edgpe/gaussian_ansatz.hpp"

namespace edgpe {

struct SolverConfig {
  // Initial step of the flow (arc length on the mass sphere, in units of the
  // preconditioned gradient).
  double dt = 1.0;
  int max_iters = 4000;
  // Relative energy change below which the run is considered stalled.
  double energy_tol = 1e-14;
  // Relative residual ||G u + beta u|| / (|beta| ||u||) required for convergence.
  double residual_tol = 1e-6;
  // |Q| <= virial_tol * max(1, A) required for convergence.
  double virial_tol = 1e-4;
  std::vector<GaussianAnsatz> restarts;
  // Spreading is declared once this fraction of the mass reaches the box walls
  // while E > 0.
  double spreading_boundary_mass = 1e-3;
  // Nonlinear conjugate directions (false: plain preconditioned gradient flow).
  bool conjugate = true;
};

enum class SolveStatus { converged, not_converged, spreading };

std::string_view to_string(SolveStatus s);

struct SolveResult {
  WaveField field;
  EnergyBreakdown energy;
  ChemicalPotentialReport chemical;
  SolveStatus status = SolveStatus::not_converged;
  int iterations = 0;
  bool energy_monotone = true;
  // Energy after each accepted iteration.
  std::vector<double> energy_history;

  bool converged() const noexcept { return status == SolveStatus::converged; }
};

// One constrained descent from a given initial field (rescaled to mass c).
SolveResult minimize_from(const EnergyModel& model, const WaveField& initial, double c,
                          const SolverConfig& config);

// Multistart over config.restarts (plus optional extra seeds); lowest energy wins,
// ties within 1e-10 resolved by residual.
SolveResult minimize_on_sphere(double c, const EnergyModel& model, const SolverConfig& config,
                               const std::vector<WaveField>& extra_seeds = {});

// Default multistart seeds for mass c on a grid: the lowest-energy Gaussian
// that fits the box, an isotropic Gaussian, and the prolate sigma = sqrt(tau)
// or oblate tau = sqrt(sigma) shape matching the sign of lambda2.
std::vector<GaussianAnsatz> default_restarts(const ModelParams& params, double c, const Grid3D& grid);

struct GammaPoint {
  double c = 0.0;
  double gamma = 0.0;
  // Lowest energy of any candidate found (may be positive: metastable or spreading).
  double best_energy = 0.0;
  bool valid = true;
  bool minimizer_evidence = false;
  SolveStatus status = SolveStatus::not_converged;
  std::optional<WaveField> field;
  std::optional<EnergyBreakdown> energy;
};

struct GammaCurve {
  std::vector<double> masses;
  std::vector<double> gammas;
  std::vector<GammaPoint> points;

  bool nonincreasing(double slack) const;
  // Slope differences (right minus left) of consecutive secants; concave iff all <= 0.
  std::vector<double> second_differences() const;
  bool concave(double slack) const;
};

// Estimated gamma(c) = min(0, best energy) on ascending masses. Each mass uses
// the Gaussian restarts and the c-changing rescalings of neighbouring minimizers.
GammaCurve gamma_curve(const std::vector<double>& masses, const EnergyModel& model,
                       const SolverConfig& config);

struct CriticalMassEstimate {
  double c_b = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int bisections = 0;
  double epsilon = 0.0;
};

// Bisection on gamma(c) < -epsilon between c_lo (no negative energy) and c_hi
// (negative energy). Throws InvalidBracket when the endpoint evidence disagrees.
// Stops when the bracket width drops below rel_width * upper.
CriticalMassEstimate estimate_cb(const EnergyModel& model, const SolverConfig& config, double c_lo,
                                 double c_hi, double rel_width = 0.05,
                                 const std::optional<WaveField>& hint = std::nullopt,
                                 std::optional<double> epsilon = std::nullopt);

// u^i_{side,t}: keeps the half {x_i <= t} (side 1) or {x_i >= t} (side 2) and
// mirrors it across the plane x_i = t. axis is 1, 2 or 3.
WaveField reflection_extension(const WaveField& u, int axis, int side, double t);
// Plane position t with int_{x_i <= t} |u|^2 = fraction * ||u||^2.
double mass_splitting_plane(const WaveField& u, int axis, double fraction = 0.5);

struct QualitativeReport {
  double phase_deviation = 0.0;
  double min_modulus_core = 0.0;
  double max_modulus = 0.0;
  double axial_defect = 0.0;
  double radial_defect = 0.0;
  double planar_defect = 0.0;
  double decay_slope = 0.0;
  double decay_r2 = 0.0;
  std::array<double, 3> center{};
};

QualitativeReport qualitative_diagnostics(const WaveField& u);

// Translate so the centre of mass sits at the origin.
WaveField recenter(const WaveField& u, std::array<double, 3>* center = nullptr);
// Average over `count` rotations about axis (1 or 3); requires a square cross-section.
WaveField rotational_average(const WaveField& u, int axis, int count = 16);

}  // namespace edgpe
