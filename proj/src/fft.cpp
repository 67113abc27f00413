#include "fft.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>

#include "tspde/error.hpp"

namespace tspde::detail {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(const GridSpec& grid) : grid_(grid) {
  const int n = grid.n();
  half_size_ = grid.dim() == 1 ? std::size_t(n / 2 + 1)
                               : std::size_t(n) * std::size_t(n / 2 + 1);
  std::lock_guard lock(planner_mutex());
  real_buf_ = fftw_alloc_real(grid.size());
  spec_buf_ = fftw_alloc_complex(half_size_);
  if (!real_buf_ || !spec_buf_) {
    fftw_free(real_buf_);
    fftw_free(spec_buf_);
    throw std::bad_alloc();
  }
  if (grid.dim() == 1) {
    r2c_ = fftw_plan_dft_r2c_1d(n, real_buf_, spec_buf_, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_1d(n, spec_buf_, real_buf_, FFTW_ESTIMATE);
  } else {
    r2c_ = fftw_plan_dft_r2c_2d(n, n, real_buf_, spec_buf_, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_2d(n, n, spec_buf_, real_buf_, FFTW_ESTIMATE);
  }
  if (!r2c_ || !c2r_) {
    if (r2c_) fftw_destroy_plan(r2c_);
    if (c2r_) fftw_destroy_plan(c2r_);
    fftw_free(real_buf_);
    fftw_free(spec_buf_);
    throw Error(ErrorKind::numerical, "FFTW plan creation failed");
  }
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(r2c_);
  fftw_destroy_plan(c2r_);
  fftw_free(real_buf_);
  fftw_free(spec_buf_);
}

void RealFft::forward(std::span<const double> in, std::span<Complex> out) {
  std::copy(in.begin(), in.end(), real_buf_);
  fftw_execute(r2c_);
  std::memcpy(static_cast<void*>(out.data()), spec_buf_, half_size_ * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const Complex> in, std::span<double> out) {
  std::memcpy(spec_buf_, in.data(), half_size_ * sizeof(fftw_complex));
  fftw_execute(c2r_);
  std::copy(real_buf_, real_buf_ + grid_.size(), out.begin());
}

std::array<int, 2> RealFft::half_wave_numbers(std::size_t pos) const noexcept {
  const int n = grid_.n();
  const int last = n / 2 + 1;
  if (grid_.dim() == 1) return {int(pos), 0};
  const int i = int(pos / last);
  const int j = int(pos % last);
  return {i < n / 2 ? i : i - n, j};
}

long long RealFft::half_norm_sq(std::size_t pos) const noexcept {
  const auto k = half_wave_numbers(pos);
  return 1LL * k[0] * k[0] + 1LL * k[1] * k[1];
}

}  // namespace tspde::detail
