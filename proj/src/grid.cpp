#include "tspde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tspde/error.hpp"

namespace tspde {

GridSpec::GridSpec(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorKind::unsupported_dimension,
                "grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorKind::config,
                "points per axis must be even and >= 2, got " + std::to_string(n));
  }
  dx_ = two_pi / n;
  size_ = dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
}

double GridSpec::cell_volume() const noexcept {
  return dim_ == 1 ? dx_ : dx_ * dx_;
}

int GridSpec::offset_of(int signed_idx) const noexcept {
  int o = (signed_idx + n_ / 2) % n_;
  return o < 0 ? o + n_ : o;
}

std::array<int, 2> GridSpec::multi_index(std::size_t pos) const noexcept {
  if (dim_ == 1) return {signed_index(int(pos)), 0};
  return {signed_index(int(pos / n_)), signed_index(int(pos % n_))};
}

std::size_t GridSpec::position(std::array<int, 2> idx) const noexcept {
  if (dim_ == 1) return std::size_t(offset_of(idx[0]));
  return std::size_t(offset_of(idx[0])) * n_ + std::size_t(offset_of(idx[1]));
}

long long GridSpec::norm_sq(std::size_t pos) const noexcept {
  const auto k = multi_index(pos);
  return 1LL * k[0] * k[0] + 1LL * k[1] * k[1];
}

double GridSpec::coordinate(std::size_t pos, int axis) const noexcept {
  return dx_ * multi_index(pos)[axis];
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw Error(ErrorKind::grid_mismatch,
                std::string(what) + ": grids differ (d=" + std::to_string(a.dim()) +
                    ", N=" + std::to_string(a.n()) + " vs d=" + std::to_string(b.dim()) +
                    ", N=" + std::to_string(b.n()) + ")");
  }
}

// ---------------------------------------------------------------------------

RealField::RealField(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {}

RealField::RealField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::config, "real field has " + std::to_string(values_.size()) +
                                       " values, grid needs " +
                                       std::to_string(grid_.size()));
  }
}

bool RealField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(GridSpec grid)
    : grid_(grid), coeffs_(grid.size(), Complex{}) {}

SpectralField::SpectralField(GridSpec grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw Error(ErrorKind::config, "spectral field has " + std::to_string(coeffs_.size()) +
                                       " coefficients, grid needs " +
                                       std::to_string(grid_.size()));
  }
}

double SpectralField::hermitian_defect() const noexcept {
  double worst = 0.0;
  for (std::size_t p = 0; p < coeffs_.size(); ++p) {
    const auto k = grid_.multi_index(p);
    const auto& mirror = coeffs_[grid_.position({-k[0], -k[1]})];
    worst = std::max(worst, std::abs(coeffs_[p] - std::conj(mirror)));
  }
  return worst;
}

double SpectralField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace tspde
