#pragma once

#include <array>

#include "edgpe/grid.hpp"

namespace edgpe {

// One axis of a separable affine resampling: the output at x samples the
// input at a * x + b.
struct AxisMap {
  double a = 1.0;
  double b = 0.0;
};

struct ResampleReport {
  // Fraction of the input mass in samples whose preimage leaves the box.
  double clipped_fraction = 0.0;
  // Fraction of the output's spectral energy above 2/3 of the Nyquist wavenumber.
  double spectral_tail = 0.0;
};

// out(x) = amplitude * u(a0 x0 + b0, a1 x1 + b1, a2 x2 + b2), evaluated with the
// trigonometric interpolant of u inside the box and zero outside it.
WaveField resample(const WaveField& u, const std::array<AxisMap, 3>& maps, double amplitude,
                   ResampleReport* report = nullptr);

// Fraction of spectral energy above `fraction` of the Nyquist wavenumber on any axis.
double spectral_tail_fraction(const WaveField& u, double fraction = 2.0 / 3.0);

}  // namespace edgpe
