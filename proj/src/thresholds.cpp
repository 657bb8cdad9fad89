#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include "edgpe/errors.hpp"
#include "edgpe/kernels.hpp"
#include "edgpe/spectral.hpp"
#include "edgpe/thresholds.hpp"

namespace edgpe {

namespace {

constexpr double pi = std::numbers::pi;

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 2.0)) throw std::invalid_argument("Gagliardo-Nirenberg sigma must lie in (0, 2)");
}

// Quadrature terms of log J for a real field, plus the L2 gradient of log J.
struct QuotientTerms {
  double P = 0.0;
  double A = 0.0;
  double M = 0.0;
  double logJ = 0.0;
};

QuotientTerms quotient_terms(const SpectralContext& ctx, std::span<const Complex> u, double sigma,
                             std::vector<Complex>* gradient) {
  const Grid3D& g = ctx.grid();
  const std::size_t n = u.size();
  const double h3 = g.cell_volume();
  const auto& k2 = ctx.k_squared();
  std::vector<Complex> spec(n);
  ctx.forward_dft(u, spec);
  QuotientTerms t;
  t.M = h3 * kernels::sum_norm_sq(u);
  t.P = h3 * kernels::sum_abs_pow(u, 2.0 * sigma + 2.0);
  t.A = h3 / static_cast<double>(n) * kernels::sum_weighted_norm_sq(spec, k2);
  t.logJ = std::log(t.P) - 1.5 * sigma * std::log(t.A) - 0.5 * (2.0 - sigma) * std::log(t.M);
  if (gradient) {
    // -Lap u
    for (std::size_t i = 0; i < n; ++i) spec[i] *= k2[i] / static_cast<double>(n);
    ctx.inverse_dft(spec, spec);
    gradient->resize(n);
    const double cp = (2.0 * sigma + 2.0) / t.P;
    const double ca = 3.0 * sigma / t.A;
    const double cm = (2.0 - sigma) / t.M;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = u[i].real();
      (*gradient)[i] = cp * std::pow(std::abs(v), 2.0 * sigma) * v - ca * spec[i].real() - cm * v;
    }
  }
  return t;
}

std::vector<Complex> radial_profile(const Grid3D& g, double q, double s) {
  std::vector<Complex> u(g.size());
  for (std::size_t k = 0; k < g.points(2); ++k)
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) {
        const double x = g.coordinate(0, i), y = g.coordinate(1, j), z = g.coordinate(2, k);
        u[g.index(i, j, k)] = std::exp(-std::pow(std::sqrt(x * x + y * y + z * z) / s, q));
      }
  return u;
}

}  // namespace

std::string_view to_string(GNMethod m) {
  return m == GNMethod::ode_ground_state ? "ode_ground_state" : "direct_maximization";
}

double weinstein_quotient(const WaveField& u, double sigma) {
  check_sigma(sigma);
  const double P = std::pow(norm_lp(u, 2.0 * sigma + 2.0), 2.0 * sigma + 2.0);
  const double A = gradient_norm_sq(u);
  const double M = mass(u);
  if (!(A > 0.0) || !(M > 0.0)) throw std::invalid_argument("Weinstein quotient undefined for constant fields");
  return P / (std::pow(A, 1.5 * sigma) * std::pow(M, 0.5 * (2.0 - sigma)));
}

GNConstant gn_constant_shooting(double sigma) {
  check_sigma(sigma);
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 5>;  // Q, Q', int Q^2 r^2, int |Q|^{2s+2} r^2, int Q'^2 r^2
  const double power = 2.0 * sigma + 1.0;
  auto rhs = [&](const State& y, State& dy, double r) {
    const double aq = std::abs(y[0]);
    dy[0] = y[1];
    dy[1] = -2.0 / r * y[1] + y[0] - std::pow(aq, power - 1.0) * y[0];
    dy[2] = y[0] * y[0] * r * r;
    dy[3] = std::pow(aq, power + 1.0) * r * r;
    dy[4] = y[1] * y[1] * r * r;
  };
  enum class Outcome { overshoot, undershoot, undecided };
  struct Shot {
    Outcome outcome;
    State state;
  };
  const double rmax = 40.0;
  auto shoot = [&](double a) {
    const double r0 = 1e-4;
    const double curv = (a - std::pow(a, power)) / 3.0;
    State y{a + 0.5 * curv * r0 * r0, curv * r0, 0.0, 0.0, 0.0};
    auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(y, r0, 1e-3);
    while (stepper.current_time() < rmax) {
      stepper.do_step(rhs);
      const State& s = stepper.current_state();
      if (s[0] < 0.0) return Shot{Outcome::overshoot, s};
      if (s[1] > 0.0) return Shot{Outcome::undershoot, s};
    }
    return Shot{Outcome::undecided, stepper.current_state()};
  };

  double lo = 0.5;
  double hi = 2.0;
  if (shoot(lo).outcome != Outcome::undershoot) throw ShootingError("shooting: Q(0) = 1/2 does not undershoot");
  while (shoot(hi).outcome != Outcome::overshoot) {
    hi *= 1.5;
    if (hi > 64.0) throw ShootingError("shooting: no overshooting initial value up to Q(0) = 64");
  }
  int iterations = 0;
  while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    const Shot s = shoot(mid);
    if (s.outcome == Outcome::overshoot) hi = mid;
    else if (s.outcome == Outcome::undershoot) lo = mid;
    else break;
    ++iterations;
  }
  const State y = shoot(lo).state;
  const double M = 4.0 * pi * y[2];
  const double P = 4.0 * pi * y[3];
  const double A = 4.0 * pi * y[4];
  GNConstant out;
  out.sigma = sigma;
  out.method = GNMethod::ode_ground_state;
  out.quotient = P / (std::pow(A, 1.5 * sigma) * std::pow(M, 0.5 * (2.0 - sigma)));
  out.value = std::pow(out.quotient, 1.0 / (2.0 * sigma + 2.0));
  out.residual = std::abs(A / M * (2.0 - sigma) / (3.0 * sigma) - 1.0);
  out.iterations = iterations;
  return out;
}

GNConstant gn_constant(double sigma, const GNOptions& options) {
  check_sigma(sigma);
  const Grid3D grid = Grid3D::cubic(options.points, options.length);
  const auto ctx = SpectralContext::for_grid(grid);
  const double width = options.length / 12.0;

  // Trial family: exp(-(r/width)^q), searched over q.
  auto neg_log_j = [&](double q) {
    const auto u = radial_profile(grid, q, width);
    return -quotient_terms(*ctx, u, sigma, nullptr).logJ;
  };
  const auto best = boost::math::tools::brent_find_minima(neg_log_j, 0.8, 3.0, 30);
  std::vector<Complex> u = radial_profile(grid, best.first, width);

  // The maximizers of J solve -Lap Q + Q = |Q|^{2s} Q up to scaling. Petviashvili
  // iteration from the best trial converges to it geometrically; J is flat along
  // dilations, which stalls plain ascent.
  const auto& k2 = ctx->k_squared();
  const std::size_t n = u.size();
  const double power = 2.0 * sigma;
  const double gamma = (power + 1.0) / power;
  {
    // Match the amplitude to the equation's scale before iterating.
    const QuotientTerms t = quotient_terms(*ctx, u, sigma, nullptr);
    const double s = std::pow((t.A + t.M) / t.P, 1.0 / power);
    for (Complex& z : u) z *= s;
  }
  std::vector<Complex> spec(n), nl(n);
  double defect = 1.0;
  int it = 0;
  for (; it < options.max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = u[i].real();
      nl[i] = std::pow(std::abs(v), power) * v;
    }
    ctx->forward_dft(u, spec);
    ctx->forward_dft(nl, nl);
    double lin = 0.0, non = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lin += (1.0 + k2[i]) * std::norm(spec[i]);
      non += (std::conj(spec[i]) * nl[i]).real();
    }
    const double ratio = lin / non;
    const double factor = std::pow(ratio, gamma) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) nl[i] *= factor / (1.0 + k2[i]);
    ctx->inverse_dft(nl, nl);
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex z = nl[i].real();
      diff += std::norm(z - u[i]);
      norm += std::norm(z);
      u[i] = z;
    }
    defect = std::max(std::abs(ratio - 1.0), std::sqrt(diff / norm));
    if (defect < options.tol) break;
  }
  if (!(defect < options.tol)) throw std::runtime_error("Gagliardo-Nirenberg maximization stalled");
  const QuotientTerms cur = quotient_terms(*ctx, u, sigma, nullptr);
  const double decrement = defect * defect;
  GNConstant out;
  out.sigma = sigma;
  out.method = GNMethod::direct_maximization;
  out.quotient = std::exp(cur.logJ);
  out.value = std::pow(out.quotient, 1.0 / (2.0 * sigma + 2.0));
  out.residual = std::sqrt(std::max(decrement, 0.0));
  out.iterations = it;
  if (options.shooting_cross_check) out.cross_check = gn_constant_shooting(sigma).value;
  return out;
}

ScanSpec default_threshold_scan(const ModelParams& params) {
  ScanSpec s;
  s.sigma = log_space(0.1, 10.0, 61);
  s.tau = log_space(0.1, 10.0, 61);
  s.c = log_space(1e-2, 1e4, 13);
  (void)params;
  return s;
}

ThresholdReport threshold_report(const ModelParams& params, const ThresholdConfig& config) {
  params.validate();
  ThresholdReport rep;
  rep.regime = classify_regime(params);
  rep.C1 = config.C1 ? *config.C1 : gn_constant(1.0, config.gn).value;
  rep.c_a = mass_lower_bound_ca(params, rep.C1);
  if (rep.regime == Regime::A1 || rep.regime == Regime::A2) {
    rep.ordering_ok = true;
    rep.note = "B is nonnegative in this regime: no minimizers, c_a is infinite";
    return rep;
  }
  const ScanSpec spec = config.scan.tau.empty() ? default_threshold_scan(params) : config.scan;
  const ScanReport scan = gaussian_scan(params, spec, false);
  if (!scan.refined_witness) {
    rep.note = "no negative-energy Gaussian witness on the scanned shapes";
    return rep;
  }
  rep.witness = scan.refined_witness;
  rep.c_c = scan.refined_witness->c;
  if (!config.estimate_cb) {
    rep.ordering_ok = rep.c_a <= *rep.c_c;
    rep.note = "c_b not estimated";
    return rep;
  }
  const EnergyModel model(config.grid, params, config.dipolar);
  const double c_hi = *rep.c_c;
  const std::optional<WaveField> hint = sample_gaussian(config.grid, *rep.witness);
  double c_lo = config.c_lo.value_or(std::max(rep.c_a, 0.25 * c_hi));
  CriticalMassEstimate est;
  try {
    est = estimate_cb(model, config.solver, c_lo, c_hi, config.rel_width, hint);
  } catch (const InvalidBracket&) {
    if (config.c_lo || !(rep.c_a < c_lo)) throw;
    c_lo = rep.c_a;
    est = estimate_cb(model, config.solver, c_lo, c_hi, config.rel_width, hint);
  }
  rep.c_b = est;
  rep.ordering_ok = rep.c_a <= est.upper && est.lower <= *rep.c_c;
  rep.note = rep.ordering_ok ? "c_a <= c_b <= c_c within the bracket" : "ordering violated";
  return rep;
}

}  // namespace edgpe
