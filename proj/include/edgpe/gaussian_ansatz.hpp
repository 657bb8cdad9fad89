#pragma once

#include <optional>
#include <vector>

#include "edgpe/dipolar.hpp"
#include "edgpe/grid.hpp"

namespace edgpe {

// u(x) = sqrt(8c / (pi^{3/2} sigma^2 tau)) exp(-2((x1^2 + x2^2)/sigma^2 + x3^2/tau^2)).
struct GaussianAnsatz {
  double sigma = 1.0;
  double tau = 1.0;
  double c = 1.0;
};

struct GaussianCoeffs {
  double Atilde = 0.0;
  double Btilde = 0.0;
  double Ctilde = 0.0;
};

struct MassWindow {
  double lower = 0.0;
  double upper = 0.0;
  bool exists = false;
};

GaussianCoeffs gaussian_energy_coeffs(double sigma, double tau, const ModelParams& params);
// Atilde c + Btilde c^2 + Ctilde c^{p/2}.
double gaussian_energy(const GaussianAnsatz& g, const ModelParams& params);
// The anisotropic part of Btilde: Btilde = sqrt(2)/pi^{3/2} (l1/(tau sigma^2) + l2 h(r)/tau^3),
// with r = sigma^2/tau^2. Exposed for the branch-continuity tests.
double btilde_shape(double r);

WaveField sample_gaussian(const Grid3D& grid, const GaussianAnsatz& g);

// Masses with negative ansatz energy at fixed (sigma, tau).
MassWindow negative_energy_window_p5(double sigma, double tau, const ModelParams& params);
MassWindow negative_energy_window_p6(double sigma, double tau, const ModelParams& params);
// Any p: the interval where Atilde + Btilde c + Ctilde c^{p/2-1} < 0.
MassWindow negative_energy_window(double sigma, double tau, const ModelParams& params);

// Real roots of a3 s^3 + a2 s^2 + a0 (no linear term), ascending.
std::vector<double> depressed_cubic_roots(double a3, double a2, double a0);

// Lower bound for the critical mass from the B estimate and the optimal
// Gagliardo-Nirenberg constant C1 (||u||_4^4 <= C1^4 ||grad u||^3 ||u||).
// Infinite in regimes A1 and A2.
double mass_lower_bound_ca(const ModelParams& params, double C1);

// Quantities entering the closed-form limits along the scalings where the
// ansatz energy turns negative.
double p5_threshold(double sigma, double tau, const ModelParams& params);  // -4 Btilde^3 / (27 Ctilde^2)
double p6_discriminant(double sigma, double tau, const ModelParams& params);  // Btilde^2 - 4 Atilde Ctilde
// -3125 (3 l1 - 4 pi l2)^3 / (110592 sqrt(2) l3^2) and the (3 l1 + 8 pi l2) variant.
double printed_p5_limit_a3(const ModelParams& params);
double printed_p5_limit_a4(const ModelParams& params);
// 2 l1^2/(pi^3 tau^6) - 1536 l3 / (25 sqrt(5) pi^{9/4} tau^{13/2}).
double printed_p6_limit(double tau, const ModelParams& params);

struct ScanSpec {
  std::vector<double> sigma;
  std::vector<double> tau;
  std::vector<double> c;
  // When set, sigma is tied to sqrt(tau) and the sigma list is ignored.
  bool sqrt_shape = false;
};

struct ScanRow {
  GaussianAnsatz g;
  GaussianCoeffs coeffs;
  double E = 0.0;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  ScanRow best;  // argmin E
  // Smallest scanned mass with E < 0.
  std::optional<ScanRow> witness;
  // Smallest mass with negative ansatz energy over the scanned shapes, solved
  // exactly in c; the witness mass c_c.
  std::optional<GaussianAnsatz> refined_witness;
  std::optional<MassWindow> refined_window;
};

// Throws std::invalid_argument for an empty scan.
ScanReport gaussian_scan(const ModelParams& params, const ScanSpec& spec, bool keep_rows = true);

std::vector<double> log_space(double lo, double hi, std::size_t count);

}  // namespace edgpe
