#include <doctest.h>

#include <random>

#include "edgpe/kernels.hpp"
#include "edgpe/parallel.hpp"

using namespace edgpe;
namespace k = edgpe::kernels;

namespace {

struct Data {
  std::vector<Complex> f, g;
  std::vector<double> w, rho, phi, trap;
  explicit Data(std::size_t n) : f(n), g(n), w(n), rho(n), phi(n), trap(n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& z : f) z = {u(rng), u(rng)};
    for (auto& z : g) z = {u(rng), u(rng)};
    for (auto& x : w) x = u(rng);
    for (auto& x : phi) x = u(rng);
    for (auto& x : trap) x = 1.0 + u(rng);
  }
};

bool close(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference") {
  const Data d(3 * k::reduction_block + 123);
  CHECK(k::sum_norm_sq(d.f) == doctest::Approx(k::serial::sum_norm_sq(d.f)).epsilon(1e-13));
  CHECK(k::sum_abs_pow(d.f, 5.0) == doctest::Approx(k::serial::sum_abs_pow(d.f, 5.0)).epsilon(1e-13));
  CHECK(k::sum_weighted_norm_sq(d.f, d.w) ==
        doctest::Approx(k::serial::sum_weighted_norm_sq(d.f, d.w)).epsilon(1e-12));
  const Complex a = k::sum_conj_product(d.f, d.g), b = k::serial::sum_conj_product(d.f, d.g);
  CHECK(std::abs(a - b) < 1e-10);

  std::vector<double> r1(d.f.size()), r2(d.f.size());
  k::density(d.f, r1);
  k::serial::density(d.f, r2);
  CHECK(r1 == r2);

  const k::PotentialCoeffs c{0.5, -1.0, 2.0, 5.0};
  std::vector<double> w1(d.f.size()), w2(d.f.size());
  k::local_potential(r1, d.phi, d.trap, c, w1);
  k::serial::local_potential(r1, d.phi, d.trap, c, w2);
  for (std::size_t i = 0; i < w1.size(); ++i) CHECK(w1[i] == doctest::Approx(w2[i]));
  k::local_potential(r1, {}, {}, c, w1);
  CHECK(w1[7] == doctest::Approx(0.5 * r1[7] + 2.0 * std::pow(r1[7], 1.5)));

  auto f1 = d.f, f2 = d.f;
  k::rotate_phase(f1, d.w, 0.3);
  k::serial::rotate_phase(f2, d.w, 0.3);
  CHECK(close(f1, f2, 1e-15));
  CHECK(std::abs(f1[3] - d.f[3] * std::polar(1.0, -0.3 * d.w[3])) < 1e-15);

  f1 = d.f;
  f2 = d.f;
  k::axpy({0.5, -2.0}, d.g, f1);
  k::serial::axpy({0.5, -2.0}, d.g, f2);
  CHECK(close(f1, f2, 1e-15));

  f1 = d.f;
  f2 = d.f;
  k::scale_by(f1, d.w, 2.0);
  k::serial::scale_by(f2, d.w, 2.0);
  CHECK(close(f1, f2, 1e-15));

  std::vector<Complex> o1(d.f.size()), o2(d.f.size());
  k::apply_potential(d.w, d.f, d.g, o1);
  k::serial::apply_potential(d.w, d.f, d.g, o2);
  CHECK(close(o1, o2, 1e-15));
}

TEST_CASE("reductions do not depend on the thread count") {
  const Data d(5 * k::reduction_block + 17);
  const int saved = thread_count();
  set_thread_count(1);
  const double one = k::sum_abs_pow(d.f, 4.5);
  const Complex cone = k::sum_conj_product(d.f, d.g);
  set_thread_count(3);
  CHECK(k::sum_abs_pow(d.f, 4.5) == one);
  CHECK(k::sum_conj_product(d.f, d.g) == cone);
  set_thread_count(saved);
}
