#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace tspde {

using Complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Uniform discretization of the torus [-pi, pi)^d with N points per axis.
///
/// Grid point j (per axis j_i in {-N/2, ..., N/2-1}) sits at x_j = dx * j.
/// Arrays are stored row-major with the first axis slowest; storage offset
/// j_i + N/2 per axis, so element 0 is the corner x = (-pi, ..., -pi).
class GridSpec {
 public:
  /// Throws Error(config) unless d in {1, 2} and N >= 2 is even.
  GridSpec(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  /// Grid spacing 2*pi/N.
  double dx() const noexcept { return dx_; }
  /// Density rho = (N / 2pi)^2 = dx^-2.
  double rho() const noexcept { return 1.0 / (dx_ * dx_); }
  /// rho^{-d/2} = dx^d, the volume of one grid cell.
  double cell_volume() const noexcept;
  /// N^d.
  std::size_t size() const noexcept { return size_; }

  /// Signed index (wave number or grid index) for storage offset i.
  int signed_index(int offset) const noexcept { return offset - n_ / 2; }
  /// Storage offset for a signed index, wrapping modulo N.
  int offset_of(int signed_idx) const noexcept;

  /// Signed multi-index of linear position `pos` (unused axes are 0).
  std::array<int, 2> multi_index(std::size_t pos) const noexcept;
  /// Linear position of a signed multi-index, wrapping modulo N per axis.
  std::size_t position(std::array<int, 2> idx) const noexcept;
  /// Squared Euclidean norm of the signed multi-index at `pos`.
  long long norm_sq(std::size_t pos) const noexcept;
  /// Coordinate x_j along `axis` for linear position `pos`.
  double coordinate(std::size_t pos, int axis) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dim_;
  int n_;
  double dx_;
  std::size_t size_;
};

/// Real samples u(x_j) on a grid.
class RealField {
 public:
  explicit RealField(GridSpec grid);
  RealField(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  /// Sample `fn(x1, x2)` at every grid point (x2 = 0 for d = 1).
  template <class Fn>
  static RealField sample(const GridSpec& grid, Fn&& fn) {
    RealField f(grid);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const double x1 = grid.coordinate(p, 0);
      const double x2 = grid.dim() > 1 ? grid.coordinate(p, 1) : 0.0;
      f.values_[p] = fn(x1, x2);
    }
    return f;
  }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// DFT coefficients u_hat(k) for k_i in {-N/2, ..., N/2-1}, stored with the
/// same row-major layout as RealField (offset k_i + N/2 per axis).
class SpectralField {
 public:
  explicit SpectralField(GridSpec grid);
  SpectralField(GridSpec grid, std::vector<Complex> coeffs);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  Complex& at(std::array<int, 2> k) noexcept { return coeffs_[grid_.position(k)]; }
  const Complex& at(std::array<int, 2> k) const noexcept {
    return coeffs_[grid_.position(k)];
  }

  /// Largest |u_hat(k) - conj(u_hat(-k))|, with -k taken modulo N.
  double hermitian_defect() const noexcept;
  double max_abs() const noexcept;

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace tspde
