#include <cmath>

#include "edgpe/kernels.hpp"

namespace edgpe::kernels::serial {

double sum_norm_sq(std::span<const Complex> f) {
  double s = 0.0;
  for (const Complex& z : f) s += std::norm(z);
  return s;
}

double sum_abs_pow(std::span<const Complex> f, double p) {
  double s = 0.0;
  for (const Complex& z : f) s += std::pow(std::abs(z), p);
  return s;
}

double sum_weighted_norm_sq(std::span<const Complex> f, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::norm(f[i]);
  return s;
}

Complex sum_conj_product(std::span<const Complex> f, std::span<const Complex> g) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s;
}

void density(std::span<const Complex> f, std::span<double> rho) {
  for (std::size_t i = 0; i < f.size(); ++i) rho[i] = std::norm(f[i]);
}

void scale_by(std::span<Complex> f, std::span<const double> m, double s) {
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= s * m[i];
}

void rotate_phase(std::span<Complex> f, std::span<const double> w, double dt) {
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= std::polar(1.0, -dt * w[i]);
}

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void local_potential(std::span<const double> rho, std::span<const double> phi,
                     std::span<const double> trap, const PotentialCoeffs& c, std::span<double> w) {
  const double q = 0.5 * (c.p - 2.0);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double v = c.lambda1 * rho[i] + c.lambda3 * std::pow(rho[i], q);
    if (!phi.empty()) v += c.lambda2 * phi[i];
    if (!trap.empty()) v += trap[i];
    w[i] = v;
  }
}

void apply_potential(std::span<const double> w, std::span<const Complex> f,
                     std::span<const Complex> extra, std::span<Complex> out) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = w[i] * f[i];
    if (!extra.empty()) out[i] += extra[i];
  }
}

}  // namespace edgpe::kernels::serial
