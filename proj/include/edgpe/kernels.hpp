#pragma once

#include <span>

#include "edgpe/grid.hpp"

// Pointwise and reduction kernels behind every hot loop. The top-level
// namespace holds the OpenMP versions; `serial` holds plain loops kept as the
// reference implementation for tests and benchmarks. Reductions in the
// parallel path sum fixed-size blocks and then combine the block partials in
// order, so results do not depend on the thread count.
namespace edgpe::kernels {

struct PotentialCoeffs {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double p = 5.0;
};

inline constexpr std::size_t reduction_block = 4096;

double sum_norm_sq(std::span<const Complex> f);
double sum_abs_pow(std::span<const Complex> f, double p);
double sum_weighted_norm_sq(std::span<const Complex> f, std::span<const double> w);
Complex sum_conj_product(std::span<const Complex> f, std::span<const Complex> g);

void density(std::span<const Complex> f, std::span<double> rho);
// f[i] *= s * m[i]
void scale_by(std::span<Complex> f, std::span<const double> m, double s);
// f[i] *= exp(-i dt w[i])
void rotate_phase(std::span<Complex> f, std::span<const double> w, double dt);
// y += a x
void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y);
// w = trap + l1 rho + l2 phi + l3 rho^{(p-2)/2}; `phi` and `trap` may be empty.
void local_potential(std::span<const double> rho, std::span<const double> phi,
                     std::span<const double> trap, const PotentialCoeffs& c, std::span<double> w);
// out = w * f + extra (extra may be empty).
void apply_potential(std::span<const double> w, std::span<const Complex> f,
                     std::span<const Complex> extra, std::span<Complex> out);

namespace serial {

double sum_norm_sq(std::span<const Complex> f);
double sum_abs_pow(std::span<const Complex> f, double p);
double sum_weighted_norm_sq(std::span<const Complex> f, std::span<const double> w);
Complex sum_conj_product(std::span<const Complex> f, std::span<const Complex> g);

void density(std::span<const Complex> f, std::span<double> rho);
void scale_by(std::span<Complex> f, std::span<const double> m, double s);
void rotate_phase(std::span<Complex> f, std::span<const double> w, double dt);
void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y);
void local_potential(std::span<const double> rho, std::span<const double> phi,
                     std::span<const double> trap, const PotentialCoeffs& c, std::span<double> w);
void apply_potential(std::span<const double> w, std::span<const Complex> f,
                     std::span<const Complex> extra, std::span<Complex> out);

}  // namespace serial

}  // namespace edgpe::kernels
