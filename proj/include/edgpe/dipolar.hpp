#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "edgpe/errors.hpp"
#include "edgpe/grid.hpp"
#include "edgpe/spectral.hpp"

namespace edgpe {

// V(x) = ratio1 x1^2 + ratio2 x2^2 + x3^2 with ratio_i = omega_i^2 / omega_3^2.
struct HarmonicTrap {
  double ratio1 = 1.0;
  double ratio2 = 1.0;
};

struct ModelParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 1.0;
  double p = 5.0;
  std::optional<HarmonicTrap> trap;

  // Every violated invariant (lambda3 > 0, p in (4, 6], nondegeneracy, finite values).
  std::vector<Violation> violations() const;
  // Throws ConfigError listing all violations.
  void validate() const;
};

enum class Regime { A1, A2, A3, A4 };

std::string_view to_string(Regime r);

// K^(xi) = (4 pi / 3)(2 xi3^2 - xi1^2 - xi2^2)/|xi|^2, and 0 at the origin.
double khat(const std::array<double, 3>& xi);

// max |lambda1 + lambda2 K^| over the range [-4 pi/3, 8 pi/3].
double xi_bound(const ModelParams& params);

Regime classify_regime(const ModelParams& params);

// B(u) = (2 pi)^{-3} int (lambda1 + lambda2 K^)|F(|u|^2)|^2 dxi.
double b_functional(const WaveField& u, const ModelParams& params,
                    DipolarKernel kernel = DipolarKernel::truncated);

// K * |u|^2 as a real buffer in physical space.
std::vector<double> convolution_potential(const WaveField& u, DipolarKernel kernel = DipolarKernel::truncated);
// Same data as a WaveField (imaginary part zero).
WaveField convolution_term(const WaveField& u, DipolarKernel kernel = DipolarKernel::truncated);

struct EnergySplit {
  double E1 = 0.0;
  double E2 = 0.0;
};

// E = E1 + E2 with K^ = -4pi/3 + 4pi xi3^2/|xi|^2 split off. With strict = true
// the (2/p)||u||_p^p term of E1 omits lambda3, as in the literal formula.
EnergySplit energy_split(const WaveField& u, const ModelParams& params, bool strict = false,
                         DipolarKernel kernel = DipolarKernel::truncated);

// Trap potential sampled on the grid; empty when no trap is configured.
std::vector<double> trap_potential(const Grid3D& grid, const ModelParams& params);

}  // namespace edgpe
