#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "edgpe/gaussian_ansatz.hpp"

namespace edgpe {

namespace {

constexpr double pi = std::numbers::pi;

double pi32() { return std::pow(pi, 1.5); }

double polish_root(double a3, double a2, double a0, double s) {
  for (int it = 0; it < 4; ++it) {
    const double f = (a3 * s + a2) * s * s + a0;
    const double df = (3.0 * a3 * s + 2.0 * a2) * s;
    if (df == 0.0) break;
    const double step = f / df;
    s -= step;
    if (std::abs(step) <= 1e-16 * std::abs(s)) break;
  }
  return s;
}

double find_root(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(std::abs(a), std::abs(b)); };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double btilde_shape(double r) {
  const double e = r - 1.0;
  if (std::abs(e) < 0.05) {
    double sum = 0.0;
    double ek = e;  // e^{k-1}
    for (int k = 2; k < 40; ++k) {
      const double term = ek * 8.0 * pi * (k - 1) / (3.0 * (2 * k + 1));
      sum += (k % 2 == 0) ? term : -term;
      ek *= e;
    }
    return sum;
  }
  double g;
  if (e > 0.0) {
    const double s = std::sqrt(e);
    g = std::atan(s) / s;
  } else {
    const double s = std::sqrt(-e);
    g = std::atanh(s) / s;
  }
  return (8.0 * pi / 3.0 + 4.0 * pi / (3.0 * r) - 4.0 * pi * g) / e;
}

GaussianCoeffs gaussian_energy_coeffs(double sigma, double tau, const ModelParams& params) {
  if (!(sigma > 0.0) || !(tau > 0.0)) throw std::invalid_argument("Gaussian widths must be positive");
  const double p = params.p;
  GaussianCoeffs k;
  k.Atilde = 2.0 / (sigma * sigma) + 1.0 / (tau * tau);
  const double r = (sigma * sigma) / (tau * tau);
  k.Btilde = std::numbers::sqrt2 / pi32() *
             (params.lambda1 / (tau * sigma * sigma) + params.lambda2 * btilde_shape(r) / (tau * tau * tau));
  k.Ctilde = params.lambda3 * std::pow(2.0, 1.0 + 1.5 * (p - 1.0)) /
             (std::pow(pi, 0.75 * (p - 2.0)) * std::pow(p, 2.5) * std::pow(sigma, p - 2.0) *
              std::pow(tau, 0.5 * (p - 2.0)));
  return k;
}

double gaussian_energy(const GaussianAnsatz& g, const ModelParams& params) {
  const auto k = gaussian_energy_coeffs(g.sigma, g.tau, params);
  return k.Atilde * g.c + k.Btilde * g.c * g.c + k.Ctilde * std::pow(g.c, 0.5 * params.p);
}

WaveField sample_gaussian(const Grid3D& grid, const GaussianAnsatz& g) {
  const double amp = std::sqrt(8.0 * g.c / (pi32() * g.sigma * g.sigma * g.tau));
  const double is2 = 2.0 / (g.sigma * g.sigma);
  const double it2 = 2.0 / (g.tau * g.tau);
  return WaveField::from_function(grid, [&](double x, double y, double z) {
    return Complex(amp * std::exp(-is2 * (x * x + y * y) - it2 * z * z), 0.0);
  });
}

std::vector<double> depressed_cubic_roots(double a3, double a2, double a0) {
  if (a3 == 0.0) throw std::invalid_argument("leading cubic coefficient is zero");
  const double b = a2 / a3;
  const double d = a0 / a3;
  const double P = -b * b / 3.0;
  const double Q = 2.0 * b * b * b / 27.0 + d;
  const double shift = -b / 3.0;
  std::vector<double> roots;
  const double disc = Q * Q / 4.0 + P * P * P / 27.0;
  if (disc < 0.0) {
    const double m = 2.0 * std::sqrt(-P / 3.0);
    const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2.0 * pi * k / 3.0) + shift);
  } else {
    const double sq = std::sqrt(disc);
    roots.push_back(std::cbrt(-Q / 2.0 + sq) + std::cbrt(-Q / 2.0 - sq) + shift);
  }
  for (double& s : roots) s = polish_root(a3, a2, a0, s);
  std::sort(roots.begin(), roots.end());
  return roots;
}

MassWindow negative_energy_window_p5(double sigma, double tau, const ModelParams& params) {
  if (params.p != 5.0) throw std::invalid_argument("p5 window requires p = 5");
  const auto k = gaussian_energy_coeffs(sigma, tau, params);
  MassWindow w;
  if (k.Btilde >= 0.0) return w;
  if (!(k.Atilde < -4.0 * std::pow(k.Btilde, 3) / (27.0 * k.Ctilde * k.Ctilde))) return w;
  // E(c)/c = Atilde + Btilde s^2 + Ctilde s^3 with s = sqrt(c).
  const auto roots = depressed_cubic_roots(k.Ctilde, k.Btilde, k.Atilde);
  std::vector<double> positive;
  for (double s : roots)
    if (s > 0.0) positive.push_back(s);
  if (positive.size() != 2 || !(positive[0] < positive[1])) return w;
  w.lower = positive[0] * positive[0];
  w.upper = positive[1] * positive[1];
  w.exists = gaussian_energy({sigma, tau, 0.5 * (w.lower + w.upper)}, params) < 0.0;
  return w;
}

MassWindow negative_energy_window_p6(double sigma, double tau, const ModelParams& params) {
  if (params.p != 6.0) throw std::invalid_argument("p6 window requires p = 6");
  const auto k = gaussian_energy_coeffs(sigma, tau, params);
  MassWindow w;
  const double disc = k.Btilde * k.Btilde - 4.0 * k.Atilde * k.Ctilde;
  if (k.Btilde >= 0.0 || !(disc > 0.0)) return w;
  const double q = -0.5 * (k.Btilde - std::sqrt(disc));  // Btilde < 0, so no cancellation
  w.upper = q / k.Ctilde;
  w.lower = k.Atilde / q;
  w.exists = w.lower < w.upper && gaussian_energy({sigma, tau, 0.5 * (w.lower + w.upper)}, params) < 0.0;
  return w;
}

MassWindow negative_energy_window(double sigma, double tau, const ModelParams& params) {
  if (params.p == 5.0) return negative_energy_window_p5(sigma, tau, params);
  if (params.p == 6.0) return negative_energy_window_p6(sigma, tau, params);
  const auto k = gaussian_energy_coeffs(sigma, tau, params);
  MassWindow w;
  if (k.Btilde >= 0.0) return w;
  const double q = 0.5 * params.p - 1.0;
  auto g = [&](double c) { return k.Atilde + k.Btilde * c + k.Ctilde * std::pow(c, q); };
  const double cstar = std::pow(-k.Btilde / (q * k.Ctilde), 1.0 / (q - 1.0));
  if (!(g(cstar) < 0.0)) return w;
  w.lower = find_root(g, 0.0, cstar);
  double hi = 2.0 * cstar;
  while (g(hi) < 0.0) hi *= 2.0;
  w.upper = find_root(g, cstar, hi);
  w.exists = w.lower < w.upper;
  return w;
}

double mass_lower_bound_ca(const ModelParams& params, double C1) {
  const Regime r = classify_regime(params);
  if (r == Regime::A1 || r == Regime::A2) return std::numeric_limits<double>::infinity();
  const double xi = xi_bound(params);
  const double p = params.p;
  const double branch1 = std::pow(16.0 * params.lambda3 * params.lambda3 / (p * p * xi * xi), 1.0 / (p - 4.0));
  const double branch2 = std::pow(xi, -3.0) * std::pow(C1, -8.0);
  return std::min(branch1, branch2);
}

double p5_threshold(double sigma, double tau, const ModelParams& params) {
  const auto k = gaussian_energy_coeffs(sigma, tau, params);
  return -4.0 * std::pow(k.Btilde, 3) / (27.0 * k.Ctilde * k.Ctilde);
}

double p6_discriminant(double sigma, double tau, const ModelParams& params) {
  const auto k = gaussian_energy_coeffs(sigma, tau, params);
  return k.Btilde * k.Btilde - 4.0 * k.Atilde * k.Ctilde;
}

double printed_p5_limit_a3(const ModelParams& params) {
  const double a = 3.0 * params.lambda1 - 4.0 * pi * params.lambda2;
  return -3125.0 * a * a * a / (110592.0 * std::numbers::sqrt2 * params.lambda3 * params.lambda3);
}

double printed_p5_limit_a4(const ModelParams& params) {
  const double a = 3.0 * params.lambda1 + 8.0 * pi * params.lambda2;
  return -3125.0 * a * a * a / (110592.0 * std::numbers::sqrt2 * params.lambda3 * params.lambda3);
}

double printed_p6_limit(double tau, const ModelParams& params) {
  return 2.0 * params.lambda1 * params.lambda1 / (std::pow(pi, 3) * std::pow(tau, 6)) -
         1536.0 * params.lambda3 / (25.0 * std::sqrt(5.0) * std::pow(pi, 2.25) * std::pow(tau, 6.5));
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

ScanReport gaussian_scan(const ModelParams& params, const ScanSpec& spec, bool keep_rows) {
  if (spec.tau.empty() || spec.c.empty() || (!spec.sqrt_shape && spec.sigma.empty()))
    throw std::invalid_argument("empty Gaussian scan");
  ScanReport rep;
  bool first = true;
  std::vector<std::pair<double, double>> shapes;
  for (double tau : spec.tau) {
    if (spec.sqrt_shape) {
      shapes.emplace_back(std::sqrt(tau), tau);
    } else {
      for (double sigma : spec.sigma) shapes.emplace_back(sigma, tau);
    }
  }
  std::vector<double> masses = spec.c;
  std::sort(masses.begin(), masses.end());
  for (const auto& [sigma, tau] : shapes) {
    const auto k = gaussian_energy_coeffs(sigma, tau, params);
    for (double c : masses) {
      ScanRow row{{sigma, tau, c}, k, k.Atilde * c + k.Btilde * c * c + k.Ctilde * std::pow(c, 0.5 * params.p)};
      if (first || row.E < rep.best.E) rep.best = row;
      first = false;
      if (row.E < 0.0 && (!rep.witness || c < rep.witness->g.c)) rep.witness = row;
      if (keep_rows) rep.rows.push_back(row);
    }
    const MassWindow w = negative_energy_window(sigma, tau, params);
    if (w.exists && (!rep.refined_window || w.lower < rep.refined_window->lower)) {
      rep.refined_window = w;
      double c = w.lower * (1.0 + 1e-9);
      if (!(gaussian_energy({sigma, tau, c}, params) < 0.0)) c = w.lower + 1e-6 * (w.upper - w.lower);
      rep.refined_witness = GaussianAnsatz{sigma, tau, c};
    }
  }
  return rep;
}

}  // namespace edgpe
