#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace edgpe {

using Complex = std::complex<double>;

// Periodic box [-L_i/2, L_i/2) sampled at n_i points per axis. Storage order
// is x-fastest: index = i0 + n0 * (i1 + n1 * i2).
class Grid3D {
 public:
  Grid3D(std::array<std::size_t, 3> points, std::array<double, 3> length);

  static Grid3D cubic(std::size_t points, double length) {
    return Grid3D({points, points, points}, {length, length, length});
  }

  const std::array<std::size_t, 3>& points() const noexcept { return n_; }
  const std::array<double, 3>& length() const noexcept { return length_; }
  std::size_t points(int axis) const noexcept { return n_[axis]; }
  double length(int axis) const noexcept { return length_[axis]; }
  double spacing(int axis) const noexcept { return length_[axis] / static_cast<double>(n_[axis]); }
  double cell_volume() const noexcept { return spacing(0) * spacing(1) * spacing(2); }
  double volume() const noexcept { return length_[0] * length_[1] * length_[2]; }
  std::size_t size() const noexcept { return n_[0] * n_[1] * n_[2]; }

  // Physical coordinate of sample j along an axis.
  double coordinate(int axis, std::size_t j) const noexcept {
    return -0.5 * length_[axis] + static_cast<double>(j) * spacing(axis);
  }

  // Angular wavenumbers 2*pi*k/L in transform order k = 0, 1, ..., n/2-1, -n/2, ..., -1.
  const std::vector<double>& wavenumbers(int axis) const noexcept { return xi_[axis]; }

  std::size_t index(std::size_t i0, std::size_t i1, std::size_t i2) const noexcept {
    return i0 + n_[0] * (i1 + n_[1] * i2);
  }

  bool operator==(const Grid3D& other) const noexcept {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  std::array<std::size_t, 3> n_;
  std::array<double, 3> length_;
  std::array<std::vector<double>, 3> xi_;
};

// Complex amplitude on a Grid3D; the discrete stand-in for u in H^1(R^3; C).
// The same type holds spectral coefficients (laid out in transform order).
class WaveField {
 public:
  explicit WaveField(Grid3D grid);
  WaveField(Grid3D grid, std::vector<Complex> values);

  static WaveField from_function(const Grid3D& grid,
                                 const std::function<Complex(double, double, double)>& f);

  const Grid3D& grid() const noexcept { return grid_; }
  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::vector<Complex>& storage() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  Complex& operator()(std::size_t i0, std::size_t i1, std::size_t i2) noexcept {
    return values_[grid_.index(i0, i1, i2)];
  }
  const Complex& operator()(std::size_t i0, std::size_t i1, std::size_t i2) const noexcept {
    return values_[grid_.index(i0, i1, i2)];
  }

  bool is_finite() const noexcept;
  bool compatible(const WaveField& other) const noexcept { return grid_ == other.grid_; }

  WaveField& operator+=(const WaveField& other);
  WaveField& operator-=(const WaveField& other);
  WaveField& operator*=(Complex scale) noexcept;

 private:
  Grid3D grid_;
  std::vector<Complex> values_;
};

WaveField operator+(WaveField a, const WaveField& b);
WaveField operator-(WaveField a, const WaveField& b);
WaveField operator*(Complex s, WaveField a);

// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const WaveField& a, const WaveField& b);

}  // namespace edgpe
