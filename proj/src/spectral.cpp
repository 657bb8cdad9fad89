#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "edgpe/kernels.hpp"
#include "edgpe/parallel.hpp"
#include "edgpe/spectral.hpp"

namespace edgpe {

Grid3D::Grid3D(std::array<std::size_t, 3> points, std::array<double, 3> length)
    : n_(points), length_(length) {
  for (int a = 0; a < 3; ++a) {
    if (n_[a] == 0 || n_[a] % 2 != 0)
      throw std::invalid_argument("grid points per axis must be positive and even");
    if (!(length_[a] > 0.0) || !std::isfinite(length_[a]))
      throw std::invalid_argument("box length must be positive and finite");
    const auto n = static_cast<long>(n_[a]);
    xi_[a].resize(n_[a]);
    for (long k = 0; k < n; ++k) {
      const long signed_k = k < n / 2 ? k : k - n;
      xi_[a][k] = 2.0 * std::numbers::pi * static_cast<double>(signed_k) / length_[a];
    }
  }
}

WaveField::WaveField(Grid3D grid) : grid_(std::move(grid)), values_(grid_.size()) {}

WaveField::WaveField(Grid3D grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("field size does not match grid");
}

WaveField WaveField::from_function(const Grid3D& grid,
                                   const std::function<Complex(double, double, double)>& f) {
  WaveField out(grid);
  for (std::size_t k = 0; k < grid.points(2); ++k) {
    const double z = grid.coordinate(2, k);
    for (std::size_t j = 0; j < grid.points(1); ++j) {
      const double y = grid.coordinate(1, j);
      for (std::size_t i = 0; i < grid.points(0); ++i) out(i, j, k) = f(grid.coordinate(0, i), y, z);
    }
  }
  return out;
}

bool WaveField::is_finite() const noexcept {
  for (const Complex& z : values_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

WaveField& WaveField::operator+=(const WaveField& other) {
  require_same_grid(*this, other);
  kernels::axpy(1.0, other.values(), values_);
  return *this;
}

WaveField& WaveField::operator-=(const WaveField& other) {
  require_same_grid(*this, other);
  kernels::axpy(-1.0, other.values(), values_);
  return *this;
}

WaveField& WaveField::operator*=(Complex scale) noexcept {
  for (Complex& z : values_) z *= scale;
  return *this;
}

WaveField operator+(WaveField a, const WaveField& b) { return a += b; }
WaveField operator-(WaveField a, const WaveField& b) { return a -= b; }
WaveField operator*(Complex s, WaveField a) { return a *= s; }

void require_same_grid(const WaveField& a, const WaveField& b) {
  if (!a.compatible(b)) throw std::invalid_argument("fields live on different grids");
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {

void init_fftw_threads() {
#ifdef EDGPE_OPENMP
  static std::once_flag once;
  std::call_once(once, [] { fftw_init_threads(); });
#endif
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const Complex* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

}  // namespace

double dipolar_cutoff_factor(double x) {
  if (x < 0.1) {
    const double x2 = x * x;
    return x2 / 10.0 - x2 * x2 / 280.0 + x2 * x2 * x2 / 15120.0;
  }
  return 1.0 + 3.0 * (x * std::cos(x) - std::sin(x)) / (x * x * x);
}

std::vector<double> truncated_dipolar_multiplier(const SpectralContext& ctx, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("dipolar cutoff radius must be positive");
  const auto& k2 = ctx.k_squared();
  const auto& kh = ctx.dipolar_multiplier();
  std::vector<double> out(k2.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dipolar_cutoff_factor(radius * std::sqrt(k2[i])) * kh[i];
  return out;
}

SpectralContext::SpectralContext(const Grid3D& grid) : grid_(grid) {
  const auto& n = grid.points();
  const int n0 = static_cast<int>(n[0]);
  const int n1 = static_cast<int>(n[1]);
  const int n2 = static_cast<int>(n[2]);
  {
    std::lock_guard lock(fftw_planner_mutex());
    init_fftw_threads();
#ifdef EDGPE_OPENMP
    fftw_plan_with_nthreads(thread_count());
#endif
    std::vector<Complex> a(grid.size());
    std::vector<Complex> b(grid.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_out_ = fftw_plan_dft_3d(n2, n1, n0, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    inverse_out_ = fftw_plan_dft_3d(n2, n1, n0, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    forward_in_ = fftw_plan_dft_3d(n2, n1, n0, as_fftw(a.data()), as_fftw(a.data()), FFTW_FORWARD, flags);
    inverse_in_ = fftw_plan_dft_3d(n2, n1, n0, as_fftw(a.data()), as_fftw(a.data()), FFTW_BACKWARD, flags);
  }
  if (!forward_out_ || !inverse_out_ || !forward_in_ || !inverse_in_)
    throw std::runtime_error("FFTW planning failed");

  const std::size_t total = grid.size();
  k2_.resize(total);
  khat_.resize(total);
  axial_.resize(total);
  khat_cut_.resize(total);
  axial_cut_.resize(total);
  cutoff_ = 0.5 * std::min({grid.length(0), grid.length(1), grid.length(2)});
  sign_.resize(total);
  const auto& x0 = grid.wavenumbers(0);
  const auto& x1 = grid.wavenumbers(1);
  const auto& x2 = grid.wavenumbers(2);
  const double four_pi_3 = 4.0 * std::numbers::pi / 3.0;
  for (std::size_t k = 0; k < n[2]; ++k) {
    for (std::size_t j = 0; j < n[1]; ++j) {
      for (std::size_t i = 0; i < n[0]; ++i) {
        const std::size_t idx = grid.index(i, j, k);
        const double a3 = x2[k] * x2[k];
        const double s = x0[i] * x0[i] + x1[j] * x1[j] + a3;
        k2_[idx] = s;
        axial_[idx] = s > 0.0 ? a3 / s : 1.0 / 3.0;
        khat_[idx] = s > 0.0 ? four_pi_3 * (3.0 * axial_[idx] - 1.0) : 0.0;
        const double f = dipolar_cutoff_factor(cutoff_ * std::sqrt(s));
        khat_cut_[idx] = f * khat_[idx];
        axial_cut_[idx] = f * axial_[idx] + (1.0 - f) / 3.0;
        sign_[idx] = ((i + j + k) % 2 == 0) ? 1.0 : -1.0;
      }
    }
  }
}

SpectralContext::~SpectralContext() {
  std::lock_guard lock(fftw_planner_mutex());
  for (fftw_plan p : {forward_out_, forward_in_, inverse_out_, inverse_in_})
    if (p) fftw_destroy_plan(p);
}

std::shared_ptr<const SpectralContext> SpectralContext::for_grid(const Grid3D& grid) {
  using Key = std::pair<std::array<std::size_t, 3>, std::array<double, 3>>;
  static std::mutex cache_mutex;
  static std::map<Key, std::shared_ptr<const SpectralContext>> cache;
  const Key key{grid.points(), grid.length()};
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto ctx = std::make_shared<const SpectralContext>(grid);
  std::lock_guard lock(cache_mutex);
  auto [it, inserted] = cache.emplace(key, std::move(ctx));
  return it->second;
}

void SpectralContext::forward_dft(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.data() == out.data())
    fftw_execute_dft(forward_in_, as_fftw(in.data()), as_fftw(out.data()));
  else
    fftw_execute_dft(forward_out_, as_fftw(in.data()), as_fftw(out.data()));
}

void SpectralContext::inverse_dft(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.data() == out.data())
    fftw_execute_dft(inverse_in_, as_fftw(in.data()), as_fftw(out.data()));
  else
    fftw_execute_dft(inverse_out_, as_fftw(in.data()), as_fftw(out.data()));
}

WaveField forward_transform(const WaveField& f) {
  const auto ctx = SpectralContext::for_grid(f.grid());
  WaveField out(f.grid());
  ctx->forward_dft(f.values(), out.values());
  kernels::scale_by(out.values(), ctx->centering_sign(), f.grid().cell_volume());
  return out;
}

WaveField inverse_transform(const WaveField& g) {
  const auto ctx = SpectralContext::for_grid(g.grid());
  WaveField tmp = g;
  kernels::scale_by(tmp.values(), ctx->centering_sign(),
                    1.0 / (g.grid().cell_volume() * static_cast<double>(g.size())));
  ctx->inverse_dft(tmp.values(), tmp.values());
  return tmp;
}

double norm_lp(const WaveField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm_lp requires p >= 1");
  const double h3 = f.grid().cell_volume();
  if (p == 2.0) return std::sqrt(h3 * kernels::sum_norm_sq(f.values()));
  return std::pow(h3 * kernels::sum_abs_pow(f.values(), p), 1.0 / p);
}

double mass(const WaveField& f) { return f.grid().cell_volume() * kernels::sum_norm_sq(f.values()); }

double gradient_norm_sq(const WaveField& f) {
  const auto ctx = SpectralContext::for_grid(f.grid());
  std::vector<Complex> spec(f.size());
  ctx->forward_dft(f.values(), spec);
  return f.grid().cell_volume() / static_cast<double>(f.size()) *
         kernels::sum_weighted_norm_sq(spec, ctx->k_squared());
}

double h1_norm(const WaveField& f) { return std::sqrt(mass(f) + gradient_norm_sq(f)); }

Complex inner_product(const WaveField& f, const WaveField& g) {
  require_same_grid(f, g);
  return f.grid().cell_volume() * kernels::sum_conj_product(f.values(), g.values());
}

WaveField laplacian(const WaveField& f) {
  const auto ctx = SpectralContext::for_grid(f.grid());
  WaveField out(f.grid());
  ctx->forward_dft(f.values(), out.values());
  kernels::scale_by(out.values(), ctx->k_squared(), -1.0 / static_cast<double>(f.size()));
  ctx->inverse_dft(out.values(), out.values());
  return out;
}

WaveField translate(const WaveField& f, std::array<double, 3> shift) {
  const auto ctx = SpectralContext::for_grid(f.grid());
  const Grid3D& g = f.grid();
  WaveField out(g);
  ctx->forward_dft(f.values(), out.values());
  const auto& n = g.points();
  std::array<std::vector<Complex>, 3> phase;
  for (int a = 0; a < 3; ++a) {
    phase[a].resize(n[a]);
    for (std::size_t k = 0; k < n[a]; ++k) {
      // The Nyquist mode has no partner; drop its odd part to keep real data real.
      const double xi = g.wavenumbers(a)[k];
      phase[a][k] = (k == n[a] / 2) ? Complex(std::cos(xi * shift[a]), 0.0)
                                     : std::polar(1.0, -xi * shift[a]);
    }
  }
  const double inv_n = 1.0 / static_cast<double>(f.size());
  for (std::size_t k = 0; k < n[2]; ++k)
    for (std::size_t j = 0; j < n[1]; ++j) {
      const Complex pjk = phase[1][j] * phase[2][k] * inv_n;
      for (std::size_t i = 0; i < n[0]; ++i) out(i, j, k) *= phase[0][i] * pjk;
    }
  ctx->inverse_dft(out.values(), out.values());
  return out;
}

double boundary_mass_fraction(const WaveField& f, double shell) {
  const Grid3D& g = f.grid();
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t k = 0; k < g.points(2); ++k) {
    const bool zk = std::abs(g.coordinate(2, k)) > (0.5 - shell) * g.length(2);
    for (std::size_t j = 0; j < g.points(1); ++j) {
      const bool zj = zk || std::abs(g.coordinate(1, j)) > (0.5 - shell) * g.length(1);
      for (std::size_t i = 0; i < g.points(0); ++i) {
        const double r = std::norm(f(i, j, k));
        total += r;
        if (zj || std::abs(g.coordinate(0, i)) > (0.5 - shell) * g.length(0)) outer += r;
      }
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

void density(const WaveField& f, std::span<double> rho) { kernels::density(f.values(), rho); }

}  // namespace edgpe
