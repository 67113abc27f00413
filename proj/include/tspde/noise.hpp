#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tspde/grid.hpp"
#include "tspde/rng.hpp"

namespace tspde {

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;

  std::uint64_t stream() const noexcept {
    return stream_key(master_seed, realization_index);
  }
};

/// Direct-space white-noise increment over one time step.
struct NoiseIncrement {
  RealField field;
  double dt;
};

/// Standard deviation of one site's increment: sigma sqrt(dt) rho^{d/4}.
double increment_stddev(const GridSpec& grid, double sigma, double dt);

/// Increment for step `step_index`: i.i.d. sigma sqrt(dt) rho^{d/4} N(0,1)
/// per site, drawn from counters [step_index * N^d, (step_index + 1) * N^d)
/// of the realization's stream.
NoiseIncrement sample_increment(const GridSpec& grid, const NoiseSpec& spec, double dt,
                                std::uint64_t step_index);

/// Allocation-free form of sample_increment used by the time steppers.
void sample_increment_into(std::span<double> out, const GridSpec& grid,
                           const NoiseSpec& spec, double dt, std::uint64_t step_index);

/// forward_dft of the increment. Exactly Hermitian since the field is real.
SpectralField spectral_increment(const NoiseIncrement& inc);

/// Zero every coefficient with |k| > cutoff (disc truncation).
SpectralField truncate_noise(const SpectralField& F, int cutoff);

/// Sum of consecutive increments: the coarse-step increment of the same
/// Wiener path, with dt equal to the total step.
NoiseIncrement aggregate_increments(std::span<const NoiseIncrement> fine);

/// Noise for a time stepper whose steps each cover `factor` consecutive
/// fine steps of size fine_dt; coarse step m sums fine steps
/// m*factor .. m*factor + factor - 1. factor = 1 is the plain stream.
class NoisePath {
 public:
  NoisePath(GridSpec grid, NoiseSpec spec, double fine_dt, int factor = 1);

  double step_dt() const noexcept { return fine_dt_ * factor_; }
  const NoiseSpec& spec() const noexcept { return spec_; }

  void increment(std::uint64_t step, std::span<double> out);

 private:
  GridSpec grid_;
  NoiseSpec spec_;
  double fine_dt_;
  int factor_;
  std::vector<double> scratch_;
};

}  // namespace tspde
