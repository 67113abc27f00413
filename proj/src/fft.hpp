#pragma once

#include <fftw3.h>

#include <complex>
#include <span>

#include "tspde/grid.hpp"

namespace tspde::detail {

/// Real-to-complex FFTW transforms on a torus grid, in FFTW's native layout:
/// unnormalized, forward sign -1, half spectrum of N^{d-1} * (N/2 + 1)
/// entries with index k_i in 0..N-1 (last axis 0..N/2).
///
/// Plans are built with FFTW_ESTIMATE so identical inputs give bit-identical
/// outputs across runs. Transforms execute on owned, aligned buffers;
/// an instance must not be shared between threads, but distinct instances
/// may run concurrently.
class RealFft {
 public:
  explicit RealFft(const GridSpec& grid);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t real_size() const noexcept { return grid_.size(); }
  std::size_t half_size() const noexcept { return half_size_; }
  /// Entries along the last axis of the half spectrum (N/2 + 1).
  int half_last() const noexcept { return grid_.n() / 2 + 1; }

  void forward(std::span<const double> in, std::span<Complex> out);
  /// Input is read only; the destructive c2r transform works on a copy.
  void inverse(std::span<const Complex> in, std::span<double> out);

  /// Squared wave-number norm for half-spectrum position `pos`.
  long long half_norm_sq(std::size_t pos) const noexcept;
  /// Signed wave numbers for half-spectrum position `pos` (last axis >= 0).
  std::array<int, 2> half_wave_numbers(std::size_t pos) const noexcept;

 private:
  GridSpec grid_;
  std::size_t half_size_;
  double* real_buf_ = nullptr;
  fftw_complex* spec_buf_ = nullptr;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

}  // namespace tspde::detail
