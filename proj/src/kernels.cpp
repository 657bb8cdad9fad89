#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "edgpe/kernels.hpp"
#include "edgpe/parallel.hpp"

namespace edgpe {

namespace {

std::atomic<int> thread_override{0};

int hardware_threads() {
#ifdef EDGPE_OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

int env_threads() {
  static const int cached = [] {
    const char* text = std::getenv("EDGPE_THREADS");
    if (text == nullptr) return 0;
    char* end = nullptr;
    const long v = std::strtol(text, &end, 10);
    if (end == text || v <= 0) return 0;
    return static_cast<int>(std::min<long>(v, 1 << 16));
  }();
  return cached;
}

}  // namespace

int thread_count() {
  const int forced = thread_override.load(std::memory_order_relaxed);
  if (forced > 0) return forced;
  const int hw = hardware_threads();
  const int env = env_threads();
  return env > 0 ? std::min(env, hw) : hw;
}

void set_thread_count(int threads) { thread_override.store(std::max(0, threads)); }

}  // namespace edgpe

namespace edgpe::kernels {

namespace {

using Index = std::ptrdiff_t;
constexpr Index parallel_threshold = 1 << 14;

template <class T, class Partial>
T blocked_sum(std::size_t n, Partial&& partial) {
  const Index blocks = static_cast<Index>((n + reduction_block - 1) / reduction_block);
  std::vector<T> part(static_cast<std::size_t>(blocks));
  [[maybe_unused]] const int nt = thread_count();
  EDGPE_OMP_PRAGMA("omp parallel for num_threads(nt) schedule(static) if(blocks > 4)")
  for (Index b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * reduction_block;
    const std::size_t hi = std::min(n, lo + reduction_block);
    part[static_cast<std::size_t>(b)] = partial(lo, hi);
  }
  T s{};
  for (const T& x : part) s += x;
  return s;
}

}  // namespace

double sum_norm_sq(std::span<const Complex> f) {
  return blocked_sum<double>(f.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::norm(f[i]);
    return s;
  });
}

double sum_abs_pow(std::span<const Complex> f, double p) {
  const double half = 0.5 * p;
  return blocked_sum<double>(f.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::pow(std::norm(f[i]), half);
    return s;
  });
}

double sum_weighted_norm_sq(std::span<const Complex> f, std::span<const double> w) {
  return blocked_sum<double>(f.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * std::norm(f[i]);
    return s;
  });
}

Complex sum_conj_product(std::span<const Complex> f, std::span<const Complex> g) {
  return blocked_sum<Complex>(f.size(), [&](std::size_t lo, std::size_t hi) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      re += f[i].real() * g[i].real() + f[i].imag() * g[i].imag();
      im += f[i].real() * g[i].imag() - f[i].imag() * g[i].real();
    }
    return Complex(re, im);
  });
}

void density(std::span<const Complex> f, std::span<double> rho) {
  const Index n = static_cast<Index>(f.size());
  [[maybe_unused]] const int nt = thread_count();
  EDGPE_OMP_PRAGMA("omp parallel for num_threads(nt) schedule(static) if(n > parallel_threshold)")
  for (Index i = 0; i < n; ++i) rho[i] = std::norm(f[i]);
}

void scale_by(std::span<Complex> f, std::span<const double> m, double s) {
  const Index n = static_cast<Index>(f.size());
  [[maybe_unused]] const int nt = thread_count();
  EDGPE_OMP_PRAGMA("omp parallel for num_threads(nt) schedule(static) if(n > parallel_threshold)")
  for (Index i = 0; i < n; ++i) f[i] *= s * m[i];
}

void rotate_phase(std::span<Complex> f, std::span<const double> w, double dt) {
  const Index n = static_cast<Index>(f.size());
  [[maybe_unused]] const int nt = thread_count();
  EDGPE_OMP_PRAGMA("omp parallel for num_threads(nt) schedule(static) if(n > parallel_threshold)")
  for (Index i = 0; i < n; ++i) {
    const double a = -dt * w[i];
    f[i] *= Complex(std::cos(a), std::sin(a));
  }
}

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  const Index n = static_cast<Index>(x.size());
  [[maybe_unused]] const int nt = thread_count();
  EDGPE_OMP_PRAGMA("omp parallel for num_threads(nt) schedule(static) if(n > parallel_threshold)")
  for (Index i = 0; i < n; ++i) y[i] += a * x[i];
}

void local_potential(std::span<const double> rho, std::span<const double> phi,
                     std::span<const double> trap, const PotentialCoeffs& c, std::span<double> w) {
  const Index n = static_cast<Index>(rho.size());
  const double q = 0.5 * (c.p - 2.0);
  const bool has_phi = !phi.empty();
  const bool has_trap = !trap.empty();
  [[maybe_unused]] const int nt = thread_count();
  EDGPE_OMP_PRAGMA("omp parallel for num_threads(nt) schedule(static) if(n > parallel_threshold)")
  for (Index i = 0; i < n; ++i) {
    double v = c.lambda1 * rho[i] + c.lambda3 * std::pow(rho[i], q);
    if (has_phi) v += c.lambda2 * phi[i];
    if (has_trap) v += trap[i];
    w[i] = v;
  }
}

void apply_potential(std::span<const double> w, std::span<const Complex> f,
                     std::span<const Complex> extra, std::span<Complex> out) {
  const Index n = static_cast<Index>(f.size());
  const bool has_extra = !extra.empty();
  [[maybe_unused]] const int nt = thread_count();
  EDGPE_OMP_PRAGMA("omp parallel for num_threads(nt) schedule(static) if(n > parallel_threshold)")
  for (Index i = 0; i < n; ++i) {
    Complex v = w[i] * f[i];
    if (has_extra) v += extra[i];
    out[i] = v;
  }
}

}  // namespace edgpe::kernels
