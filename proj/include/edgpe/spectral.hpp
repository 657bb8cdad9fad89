#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "edgpe/grid.hpp"

namespace edgpe {

// Periodic: the bare multiplier K^ on the torus, whose jump at xi = 0 couples
// every field to its periodic images with an error of order mass^2 / volume.
// Truncated: K^ of the kernel cut off at |x| = R = min(L)/2, continuous at the
// origin and free of image interactions for fields of diameter below R.
enum class DipolarKernel { periodic, truncated };

struct DipolarOptions {
  DipolarKernel kernel = DipolarKernel::truncated;
  // Truncation radius; 0 selects min(L)/2. Exact for fields of diameter D when
  // cutoff >= D and L_i >= cutoff + D_i on every axis.
  double cutoff = 0.0;
};

// Immutable per-grid transform machinery: FFTW plans plus the wavenumber
// tables every spectral operator needs. Instances are shared through a
// process-wide cache; execution is thread-safe (FFTW new-array execute).
class SpectralContext {
 public:
  explicit SpectralContext(const Grid3D& grid);
  ~SpectralContext();
  SpectralContext(const SpectralContext&) = delete;
  SpectralContext& operator=(const SpectralContext&) = delete;

  static std::shared_ptr<const SpectralContext> for_grid(const Grid3D& grid);

  const Grid3D& grid() const noexcept { return grid_; }

  // Unnormalized DFTs (FFTW sign conventions). `in` and `out` may alias.
  void forward_dft(std::span<const Complex> in, std::span<Complex> out) const;
  void inverse_dft(std::span<const Complex> in, std::span<Complex> out) const;

  // |xi|^2 per mode, transform order.
  const std::vector<double>& k_squared() const noexcept { return k2_; }
  // Dipolar multiplier K^(xi), with K^(0) = 0.
  const std::vector<double>& dipolar_multiplier(DipolarKernel k = DipolarKernel::periodic) const noexcept {
    return k == DipolarKernel::periodic ? khat_ : khat_cut_;
  }
  // a(xi) = xi_3^2/|xi|^2 (spherical mean 1/3 at xi = 0), so that K^ = (4 pi/3)(3a - 1).
  // The truncated variant satisfies the same identity with the truncated K^.
  const std::vector<double>& axial_fraction(DipolarKernel k = DipolarKernel::periodic) const noexcept {
    return k == DipolarKernel::periodic ? axial_ : axial_cut_;
  }
  double dipolar_cutoff_radius() const noexcept { return cutoff_; }
  // (-1)^(k0+k1+k2): converts the DFT of samples on [-L/2, L/2) into the
  // continuum phase convention.
  const std::vector<double>& centering_sign() const noexcept { return sign_; }

 private:
  Grid3D grid_;
  fftw_plan forward_out_ = nullptr;
  fftw_plan forward_in_ = nullptr;
  fftw_plan inverse_out_ = nullptr;
  fftw_plan inverse_in_ = nullptr;
  std::vector<double> k2_;
  std::vector<double> khat_;
  std::vector<double> axial_;
  std::vector<double> khat_cut_;
  std::vector<double> axial_cut_;
  double cutoff_ = 0.0;
  std::vector<double> sign_;
};

// Fourier factor of the dipolar kernel cut off at radius R, with x = R |xi|:
// 1 + 3 cos x / x^2 - 3 sin x / x^3.
double dipolar_cutoff_factor(double x);
// K^ of the kernel cut off at `radius` on the context's wavevectors.
std::vector<double> truncated_dipolar_multiplier(const SpectralContext& ctx, double radius);

// Serializes FFTW planner calls across the process.
std::mutex& fftw_planner_mutex();

// F(f)(xi) = int f(x) e^{-i x.xi} dx, discretized with the cell volume h1 h2 h3.
WaveField forward_transform(const WaveField& f);
// Exact inverse of forward_transform: (2 pi)^{-3} int g(xi) e^{i x.xi} dxi.
WaveField inverse_transform(const WaveField& g);

// Rectangle-rule L^p norm. Throws std::invalid_argument for p < 1.
double norm_lp(const WaveField& f, double p);
// ||u||_2^2.
double mass(const WaveField& f);
// A(u) = ||grad u||_2^2 through Parseval.
double gradient_norm_sq(const WaveField& f);
// Discrete H^1 norm (||f||_2^2 + ||grad f||_2^2)^{1/2}.
double h1_norm(const WaveField& f);
// <f, g> = h^3 sum conj(f) g.
Complex inner_product(const WaveField& f, const WaveField& g);
// Spectral Laplacian.
WaveField laplacian(const WaveField& f);
// Translate by a physical displacement (periodic, spectrally exact).
WaveField translate(const WaveField& f, std::array<double, 3> shift);
// Mass fraction sitting in the outer shell |x_i| > (1/2 - shell) L_i of any axis.
double boundary_mass_fraction(const WaveField& f, double shell = 1.0 / 16.0);

// Real-valued sampled data attached to a grid (densities, potentials).
using RealBuffer = std::vector<double>;
void density(const WaveField& f, std::span<double> rho);

}  // namespace edgpe
