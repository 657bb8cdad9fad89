#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fftw3.h>

#include "edgpe/ground_state.hpp"
#include "edgpe/spectral.hpp"

namespace edgpe {

namespace {

constexpr double pi = std::numbers::pi;

std::array<std::size_t, 3> strides(const Grid3D& g) { return {1, g.points(0), g.points(0) * g.points(1)}; }

// In-place 1D transforms along one axis of a 3D array.
class AxisTransform {
 public:
  AxisTransform(const Grid3D& g, int axis, std::vector<Complex>& buffer) {
    const auto st = strides(g);
    fftw_iodim dim{static_cast<int>(g.points(axis)), static_cast<int>(st[axis]), static_cast<int>(st[axis])};
    fftw_iodim loops[2];
    int r = 0;
    for (int a = 0; a < 3; ++a) {
      if (a == axis) continue;
      loops[r++] = {static_cast<int>(g.points(a)), static_cast<int>(st[a]), static_cast<int>(st[a])};
    }
    auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
    std::lock_guard lock(fftw_planner_mutex());
    forward_ = fftw_plan_guru_dft(1, &dim, 2, loops, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftw_plan_guru_dft(1, &dim, 2, loops, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward_ || !inverse_) throw std::runtime_error("FFTW planning failed");
  }
  ~AxisTransform() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  AxisTransform(const AxisTransform&) = delete;
  AxisTransform& operator=(const AxisTransform&) = delete;

  void forward() const { fftw_execute(forward_); }
  void inverse() const { fftw_execute(inverse_); }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

// out(x) = u(x with x_a replaced by x_a - s x_b), spectrally along axis a.
void shear(std::vector<Complex>& data, const Grid3D& g, const AxisTransform& tr, int a, int b, double s) {
  tr.forward();
  const auto& xi = g.wavenumbers(a);
  const double inv = 1.0 / static_cast<double>(g.points(a));
  for (std::size_t k = 0; k < g.points(2); ++k)
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) {
        const std::array<std::size_t, 3> idx{i, j, k};
        const double xb = g.coordinate(b, idx[b]);
        const std::size_t ka = idx[a];
        const double w = xi[ka];
        // Nyquist mode: keep the real (cosine) part only.
        const Complex ph = (ka == g.points(a) / 2) ? Complex(std::cos(w * s * xb), 0.0)
                                                    : std::polar(1.0, -w * s * xb);
        data[g.index(i, j, k)] *= ph * inv;
      }
  tr.inverse();
}

// Rotation by a half turn about the axis orthogonal to the (a, b) plane: exact
// index map. Writes back in place because FFTW plans are bound to `data`.
void half_turn(std::vector<Complex>& data, const Grid3D& g, int a, int b) {
  std::vector<Complex> out(data.size());
  for (std::size_t k = 0; k < g.points(2); ++k)
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) {
        std::array<std::size_t, 3> src{i, j, k};
        src[a] = (g.points(a) - src[a]) % g.points(a);
        src[b] = (g.points(b) - src[b]) % g.points(b);
        out[g.index(i, j, k)] = data[g.index(src[0], src[1], src[2])];
      }
  std::copy(out.begin(), out.end(), data.begin());
}

}  // namespace

WaveField recenter(const WaveField& u, std::array<double, 3>* center) {
  const Grid3D& g = u.grid();
  std::array<double, 3> com{0.0, 0.0, 0.0};
  double total = 0.0;
  for (std::size_t k = 0; k < g.points(2); ++k)
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) {
        const double r = std::norm(u(i, j, k));
        total += r;
        com[0] += r * g.coordinate(0, i);
        com[1] += r * g.coordinate(1, j);
        com[2] += r * g.coordinate(2, k);
      }
  if (!(total > 0.0)) throw std::invalid_argument("cannot recenter the zero field");
  for (double& x : com) x /= total;
  if (center) *center = com;
  return translate(u, {-com[0], -com[1], -com[2]});
}

WaveField rotational_average(const WaveField& u, int axis, int count) {
  const Grid3D& g = u.grid();
  int a;
  int b;
  if (axis == 3) {
    a = 0;
    b = 1;
  } else if (axis == 1) {
    a = 1;
    b = 2;
  } else {
    throw std::invalid_argument("rotation axis must be 1 or 3");
  }
  if (g.points(a) != g.points(b) || g.length(a) != g.length(b))
    throw std::invalid_argument("rotational average needs a square cross-section");
  if (count < 1) throw std::invalid_argument("rotation count must be positive");
  std::vector<Complex> buffer(u.size());
  const AxisTransform ta(g, a, buffer);
  const AxisTransform tb(g, b, buffer);
  std::vector<Complex> sum(u.size(), Complex(0.0));
  for (int r = 0; r < count; ++r) {
    double theta = 2.0 * pi * r / count;
    std::copy(u.values().begin(), u.values().end(), buffer.begin());
    if (theta > 0.5 * pi && theta < 1.5 * pi) {
      half_turn(buffer, g, a, b);
      theta -= pi;
    } else if (theta >= 1.5 * pi) {
      theta -= 2.0 * pi;
    }
    if (theta != 0.0) {
      const double t = std::tan(0.5 * theta);
      shear(buffer, g, ta, a, b, -t);
      shear(buffer, g, tb, b, a, std::sin(theta));
      shear(buffer, g, ta, a, b, -t);
    }
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += buffer[i];
  }
  for (Complex& z : sum) z /= static_cast<double>(count);
  return WaveField(g, std::move(sum));
}

QualitativeReport qualitative_diagnostics(const WaveField& field) {
  QualitativeReport rep;
  const WaveField u = recenter(field, &rep.center);
  const Grid3D& g = u.grid();
  const auto vals = u.values();
  const double unorm = norm_lp(u, 2.0);

  // Phase uniformity and positivity over the region holding 99.9% of the mass.
  Complex weighted = 0.0;
  for (const Complex& z : vals) weighted += std::abs(z) * z;
  const double theta = std::arg(weighted);
  const Complex unphase = std::polar(1.0, -theta);
  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return std::norm(vals[x]) > std::norm(vals[y]); });
  double total = 0.0;
  for (const Complex& z : vals) total += std::norm(z);
  double acc = 0.0;
  rep.min_modulus_core = std::numeric_limits<double>::infinity();
  rep.max_modulus = order.empty() ? 0.0 : std::abs(vals[order.front()]);
  for (std::size_t idx : order) {
    if (acc >= 0.999 * total) break;
    acc += std::norm(vals[idx]);
    rep.min_modulus_core = std::min(rep.min_modulus_core, std::abs(vals[idx]));
    rep.phase_deviation = std::max(rep.phase_deviation, std::abs(std::arg(vals[idx] * unphase)));
  }

  auto defect = [&](const WaveField& other) {
    WaveField d = u;
    d -= other;
    return norm_lp(d, 2.0) / unorm;
  };
  const bool square3 = g.points(0) == g.points(1) && g.length(0) == g.length(1);
  const bool square1 = g.points(1) == g.points(2) && g.length(1) == g.length(2);
  rep.axial_defect = square3 ? defect(rotational_average(u, 3)) : std::numeric_limits<double>::quiet_NaN();
  rep.radial_defect = (square3 && square1) ? std::max(rep.axial_defect, defect(rotational_average(u, 1)))
                                           : std::numeric_limits<double>::quiet_NaN();

  WaveField mirror(g);
  for (std::size_t k = 0; k < g.points(2); ++k) {
    const std::size_t km = (g.points(2) - k) % g.points(2);
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) mirror(i, j, k) = u(i, j, km);
  }
  rep.planar_defect = defect(mirror);

  // Exponential decay: log of the shell maxima of |u| against the radius.
  const double dr = std::min({g.spacing(0), g.spacing(1), g.spacing(2)});
  const double rmax = 0.5 * std::min({g.length(0), g.length(1), g.length(2)});
  const std::size_t shells = static_cast<std::size_t>(rmax / dr);
  std::vector<double> shell_max(shells, 0.0);
  for (std::size_t k = 0; k < g.points(2); ++k)
    for (std::size_t j = 0; j < g.points(1); ++j)
      for (std::size_t i = 0; i < g.points(0); ++i) {
        const double x = g.coordinate(0, i), y = g.coordinate(1, j), z = g.coordinate(2, k);
        const double r = std::sqrt(x * x + y * y + z * z);
        const auto s = static_cast<std::size_t>(r / dr);
        if (s < shells) shell_max[s] = std::max(shell_max[s], std::abs(u(i, j, k)));
      }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t s = 0; s < shells; ++s) {
    const double m = shell_max[s];
    if (m > 1e-10 * rep.max_modulus && m < 1e-3 * rep.max_modulus) {
      xs.push_back((static_cast<double>(s) + 0.5) * dr);
      ys.push_back(std::log(m));
    }
  }
  if (xs.size() >= 4) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    rep.decay_slope = sxy / sxx;
    rep.decay_r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  } else {
    rep.decay_slope = std::numeric_limits<double>::quiet_NaN();
    rep.decay_r2 = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace edgpe
