#include <algorithm>
#include <cmath>
#include <numbers>

#include "edgpe/parallel.hpp"
#include "edgpe/resample.hpp"
#include "edgpe/spectral.hpp"

namespace edgpe {

namespace {

using Index = std::ptrdiff_t;

// Periodic cardinal function of the n-point trigonometric interpolant.
double periodic_sinc(double r, std::size_t n) {
  const double nearest = std::round(r);
  if (std::abs(r - nearest) < 1e-12) {
    const long k = static_cast<long>(nearest) % static_cast<long>(n);
    return k == 0 ? 1.0 : 0.0;
  }
  const double pr = std::numbers::pi * r;
  return std::sin(pr) / (static_cast<double>(n) * std::tan(pr / static_cast<double>(n)));
}

std::vector<double> axis_matrix(const Grid3D& g, int axis, const AxisMap& map) {
  const std::size_t n = g.points(axis);
  const double h = g.spacing(axis);
  const double half = 0.5 * g.length(axis);
  std::vector<double> m(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = map.a * g.coordinate(axis, j) + map.b;
    if (y < -half * (1.0 + 1e-12) || y >= half) continue;
    for (std::size_t q = 0; q < n; ++q) m[j * n + q] = periodic_sinc((y - g.coordinate(axis, q)) / h, n);
  }
  return m;
}

bool is_identity(const AxisMap& m) { return m.a == 1.0 && m.b == 0.0; }

void apply_axis(const Grid3D& g, int axis, const std::vector<double>& m, std::vector<Complex>& data) {
  const auto& n = g.points();
  const std::size_t len = n[axis];
  const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? n[0] : n[0] * n[1]);
  const std::size_t lines = g.size() / len;
  std::vector<Complex> out(data.size());
  [[maybe_unused]] const int nt = thread_count();
  EDGPE_OMP_PRAGMA("omp parallel for num_threads(nt) schedule(static)")
  for (Index line = 0; line < static_cast<Index>(lines); ++line) {
    // Decompose the line number into the base offset of the line.
    std::size_t base;
    const auto l = static_cast<std::size_t>(line);
    if (axis == 0) base = l * n[0];
    else if (axis == 1) base = (l % n[0]) + (l / n[0]) * n[0] * n[1];
    else base = l;
    std::vector<Complex> in(len);
    for (std::size_t q = 0; q < len; ++q) in[q] = data[base + q * stride];
    for (std::size_t j = 0; j < len; ++j) {
      const double* row = &m[j * len];
      Complex s = 0.0;
      for (std::size_t q = 0; q < len; ++q) s += row[q] * in[q];
      out[base + j * stride] = s;
    }
  }
  data.swap(out);
}

}  // namespace

WaveField resample(const WaveField& u, const std::array<AxisMap, 3>& maps, double amplitude,
                   ResampleReport* report) {
  const Grid3D& g = u.grid();
  std::vector<Complex> data(u.values().begin(), u.values().end());
  for (int axis = 0; axis < 3; ++axis) {
    if (is_identity(maps[axis])) continue;
    apply_axis(g, axis, axis_matrix(g, axis, maps[axis]), data);
  }
  if (amplitude != 1.0)
    for (Complex& z : data) z *= amplitude;
  WaveField out(g, std::move(data));
  if (report) {
    const double det = std::abs(maps[0].a * maps[1].a * maps[2].a);
    const double expected = amplitude * amplitude * mass(u) / det;
    report->clipped_fraction = expected > 0.0 ? std::max(0.0, 1.0 - mass(out) / expected) : 0.0;
    report->spectral_tail = spectral_tail_fraction(out);
  }
  return out;
}

double spectral_tail_fraction(const WaveField& u, double fraction) {
  const auto ctx = SpectralContext::for_grid(u.grid());
  const Grid3D& g = u.grid();
  std::vector<Complex> spec(u.size());
  ctx->forward_dft(u.values(), spec);
  double total = 0.0;
  double tail = 0.0;
  std::array<double, 3> cut;
  for (int a = 0; a < 3; ++a) cut[a] = fraction * std::numbers::pi / g.spacing(a);
  for (std::size_t k = 0; k < g.points(2); ++k)
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) {
        const double e = std::norm(spec[g.index(i, j, k)]);
        total += e;
        if (std::abs(g.wavenumbers(0)[i]) > cut[0] || std::abs(g.wavenumbers(1)[j]) > cut[1] ||
            std::abs(g.wavenumbers(2)[k]) > cut[2])
          tail += e;
      }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace edgpe
