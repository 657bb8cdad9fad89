// Serial reference kernels against the OpenMP kernels, plus one full split
// step. Arg is the grid size per axis.
#include <random>

#include <benchmark/benchmark.h>

#include "edgpe/dynamics.hpp"
#include "edgpe/gaussian_ansatz.hpp"
#include "edgpe/kernels.hpp"
#include "edgpe/parallel.hpp"

namespace {

using edgpe::Complex;
namespace k = edgpe::kernels;

struct Data {
  std::vector<Complex> f;
  std::vector<Complex> g;
  std::vector<double> w;
  std::vector<double> rho;

  explicit Data(std::size_t n) : f(n * n * n), g(n * n * n), w(n * n * n), rho(n * n * n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& z : f) z = {u(rng), u(rng)};
    for (auto& z : g) z = {u(rng), u(rng)};
    for (auto& x : w) x = u(rng);
  }
};

template <class Fn>
void run(benchmark::State& state, Fn&& fn) {
  Data d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) fn(d);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.f.size()));
  state.counters["threads"] = edgpe::thread_count();
}

void BM_sum_norm_sq_serial(benchmark::State& s) {
  run(s, [](Data& d) { benchmark::DoNotOptimize(k::serial::sum_norm_sq(d.f)); });
}
void BM_sum_norm_sq_omp(benchmark::State& s) {
  run(s, [](Data& d) { benchmark::DoNotOptimize(k::sum_norm_sq(d.f)); });
}
void BM_sum_abs_pow_serial(benchmark::State& s) {
  run(s, [](Data& d) { benchmark::DoNotOptimize(k::serial::sum_abs_pow(d.f, 5.0)); });
}
void BM_sum_abs_pow_omp(benchmark::State& s) {
  run(s, [](Data& d) { benchmark::DoNotOptimize(k::sum_abs_pow(d.f, 5.0)); });
}
void BM_rotate_phase_serial(benchmark::State& s) {
  run(s, [](Data& d) { k::serial::rotate_phase(d.f, d.w, 1e-3); });
}
void BM_rotate_phase_omp(benchmark::State& s) {
  run(s, [](Data& d) { k::rotate_phase(d.f, d.w, 1e-3); });
}
void BM_local_potential_serial(benchmark::State& s) {
  const k::PotentialCoeffs c{0.0, 1.0, 1.0, 5.0};
  run(s, [&](Data& d) {
    k::serial::density(d.f, d.rho);
    k::serial::local_potential(d.rho, d.w, {}, c, d.w);
  });
}
void BM_local_potential_omp(benchmark::State& s) {
  const k::PotentialCoeffs c{0.0, 1.0, 1.0, 5.0};
  run(s, [&](Data& d) {
    k::density(d.f, d.rho);
    k::local_potential(d.rho, d.w, {}, c, d.w);
  });
}
void BM_conj_product_serial(benchmark::State& s) {
  run(s, [](Data& d) { benchmark::DoNotOptimize(k::serial::sum_conj_product(d.f, d.g)); });
}
void BM_conj_product_omp(benchmark::State& s) {
  run(s, [](Data& d) { benchmark::DoNotOptimize(k::sum_conj_product(d.f, d.g)); });
}

void BM_strang_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const edgpe::Grid3D grid = edgpe::Grid3D::cubic(n, 16.0);
  edgpe::ModelParams p;
  p.lambda2 = 1.0;
  const edgpe::EnergyModel model(grid, p);
  const edgpe::StrangPropagator prop(model, 1e-3);
  edgpe::WaveField psi = edgpe::sample_gaussian(grid, {1.0, 2.0, 5.0});
  for (auto _ : state) prop.advance(psi, 1);
  state.counters["threads"] = edgpe::thread_count();
}

}  // namespace

BENCHMARK(BM_sum_norm_sq_serial)->Arg(64)->Arg(128);
BENCHMARK(BM_sum_norm_sq_omp)->Arg(64)->Arg(128);
BENCHMARK(BM_sum_abs_pow_serial)->Arg(64)->Arg(128);
BENCHMARK(BM_sum_abs_pow_omp)->Arg(64)->Arg(128);
BENCHMARK(BM_rotate_phase_serial)->Arg(64)->Arg(128);
BENCHMARK(BM_rotate_phase_omp)->Arg(64)->Arg(128);
BENCHMARK(BM_local_potential_serial)->Arg(64)->Arg(128);
BENCHMARK(BM_local_potential_omp)->Arg(64)->Arg(128);
BENCHMARK(BM_conj_product_serial)->Arg(64)->Arg(128);
BENCHMARK(BM_conj_product_omp)->Arg(64)->Arg(128);
BENCHMARK(BM_strang_step)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
