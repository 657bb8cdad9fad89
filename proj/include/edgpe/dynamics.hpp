#pragma once

#include <optional>
#include <vector>

#include "edgpe/functionals.hpp"

namespace edgpe {

struct PropagationConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  // Trace (and optional snapshot) every this many steps.
  int snapshot_stride = 100;
  double conserve_tol_mass = 1e-10;
  double conserve_tol_energy = 1e-6;
  bool keep_snapshots = false;
  // p = 6 has no global theory; stepping it must be requested explicitly.
  bool experimental = false;
  DipolarOptions dipolar;
};

struct ConservationTrace {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> h1norm;
  std::vector<double> l4norm;
  std::vector<double> grad_sq;

  double max_relative_mass_drift() const;
  double max_relative_energy_drift() const;
};

struct Snapshot {
  double time = 0.0;
  WaveField field;
};

struct PropagationResult {
  WaveField final_field;
  ConservationTrace trace;
  std::vector<Snapshot> snapshots;
};

// Split-step integrator for i psi_t = -1/2 Lap psi + W(|psi|) psi. Holds the
// kinetic phase table for one dt; advance() fuses the half nonlinear steps of
// consecutive Strang steps.
class StrangPropagator {
 public:
  StrangPropagator(const EnergyModel& model, double dt);

  double dt() const noexcept { return dt_; }
  // psi <- exp(-i dt W(psi)) psi
  void nonlinear(WaveField& psi, double dt) const;
  // psi <- exp(i dt Lap / 2) psi
  void kinetic(WaveField& psi) const;
  void step(WaveField& psi) const;
  void advance(WaveField& psi, int steps) const;

 private:
  const EnergyModel& model_;
  double dt_;
  std::vector<Complex> kinetic_phase_;
};

WaveField strang_step(const WaveField& psi, double dt, const ModelParams& params);

// Free propagator U(t) = exp(i t Lap / 2), exact in Fourier space.
WaveField free_propagate(const WaveField& psi, double t);

// Throws UnderResolved on conservation drift beyond tolerance and
// NumericalOverflow on non-finite values.
PropagationResult propagate(const WaveField& psi0, const ModelParams& params, const PropagationConfig& config);

struct AprioriBounds {
  double l4 = 0.0;       // sup_t ||psi(t)||_4
  double grad_sq = 0.0;  // sup_t ||grad psi(t)||_2^2
};

// Bounds implied by energy and mass conservation, the B estimate and the
// Gagliardo-Nirenberg inequality with constant C1.
AprioriBounds apriori_bounds(const ModelParams& params, double energy0, double mass0, double C1);

struct ScatterReport {
  std::vector<double> times;
  // d[k] = ||v(t_{k+1}) - v(t_k)||_{H^1}
  std::vector<double> differences;
  std::vector<double> boundary_mass;
  bool monotone_tail = false;  // last five differences strictly shrinking
  bool boundary_ok = false;
  bool cauchy_consistent = false;
  std::optional<WaveField> psi_plus;
};

// v(t) = U(-t) psi(t) on the time grid `times` (ascending, > 0). Requires no trap.
ScatterReport scattering_diagnostic(const WaveField& psi0, const ModelParams& params, const PropagationConfig& config,
                                    const std::vector<double>& times, double boundary_tol = 1e-6);

}  // namespace edgpe
