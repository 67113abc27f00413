#include "tspde/noise.hpp"

#include <cmath>
#include <string>

#include "tspde/error.hpp"
#include "tspde/spectral.hpp"

namespace tspde {

double NormalStream::uniform(std::uint64_t i) const noexcept {
  const std::uint64_t bits = mix64(key_ + (i + 1) * 0x9e3779b97f4a7c15ULL);
  return (double(bits >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::normal(std::uint64_t i) const noexcept {
  const std::uint64_t pair = i / 2;
  const double r = std::sqrt(-2.0 * std::log(uniform(2 * pair)));
  const double theta = two_pi * uniform(2 * pair + 1);
  return (i % 2 == 0) ? r * std::cos(theta) : r * std::sin(theta);
}

void NormalStream::fill(std::span<double> out, std::uint64_t first) const noexcept {
  std::size_t m = 0;
  if (first % 2 == 1 && m < out.size()) out[m++] = normal(first);
  for (; m + 1 < out.size(); m += 2) {
    const std::uint64_t pair = (first + m) / 2;
    const double r = std::sqrt(-2.0 * std::log(uniform(2 * pair)));
    const double theta = two_pi * uniform(2 * pair + 1);
    out[m] = r * std::cos(theta);
    out[m + 1] = r * std::sin(theta);
  }
  if (m < out.size()) out[m] = normal(first + m);
}

// ---------------------------------------------------------------------------

double increment_stddev(const GridSpec& grid, double sigma, double dt) {
  return sigma * std::sqrt(dt) * std::pow(grid.rho(), grid.dim() / 4.0);
}

void sample_increment_into(std::span<double> out, const GridSpec& grid,
                           const NoiseSpec& spec, double dt, std::uint64_t step_index) {
  if (!(dt > 0.0)) throw Error(ErrorKind::config, "noise increment needs dt > 0");
  if (spec.sigma < 0.0) throw Error(ErrorKind::config, "noise intensity must be >= 0");
  if (spec.sigma == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  NormalStream stream(spec.stream());
  stream.fill(out, step_index * grid.size());
  const double amp = increment_stddev(grid, spec.sigma, dt);
  for (double& v : out) v *= amp;
}

NoiseIncrement sample_increment(const GridSpec& grid, const NoiseSpec& spec, double dt,
                                std::uint64_t step_index) {
  NoiseIncrement inc{RealField(grid), dt};
  sample_increment_into(inc.field.values(), grid, spec, dt, step_index);
  return inc;
}

SpectralField spectral_increment(const NoiseIncrement& inc) {
  return forward_dft(inc.field);
}

SpectralField truncate_noise(const SpectralField& F, int cutoff) {
  if (cutoff < 0) throw Error(ErrorKind::config, "truncation cutoff must be >= 0");
  SpectralField out = F;
  const long long c2 = 1LL * cutoff * cutoff;
  for (std::size_t p = 0; p < out.size(); ++p) {
    if (F.grid().norm_sq(p) > c2) out[p] = Complex{};
  }
  return out;
}

NoiseIncrement aggregate_increments(std::span<const NoiseIncrement> fine) {
  if (fine.empty()) throw Error(ErrorKind::config, "aggregate_increments: empty list");
  NoiseIncrement out = fine.front();
  for (std::size_t i = 1; i < fine.size(); ++i) {
    require_same_grid(out.field.grid(), fine[i].field.grid(), "aggregate_increments");
    auto dst = out.field.values();
    auto src = fine[i].field.values();
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += src[p];
    out.dt += fine[i].dt;
  }
  return out;
}

// ---------------------------------------------------------------------------

NoisePath::NoisePath(GridSpec grid, NoiseSpec spec, double fine_dt, int factor)
    : grid_(grid), spec_(spec), fine_dt_(fine_dt), factor_(factor) {
  if (factor < 1) throw Error(ErrorKind::config, "noise aggregation factor must be >= 1");
  if (!(fine_dt > 0.0)) throw Error(ErrorKind::config, "noise path needs dt > 0");
  if (factor > 1) scratch_.resize(grid.size());
}

void NoisePath::increment(std::uint64_t step, std::span<double> out) {
  const std::uint64_t first = step * std::uint64_t(factor_);
  sample_increment_into(out, grid_, spec_, fine_dt_, first);
  for (int f = 1; f < factor_; ++f) {
    sample_increment_into(scratch_, grid_, spec_, fine_dt_, first + f);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += scratch_[p];
  }
}

}  // namespace tspde
