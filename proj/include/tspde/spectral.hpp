#pragma once

#include <optional>
#include <vector>

#include "tspde/grid.hpp"

namespace tspde {

/// Symmetric DFT
///   u_hat(k) = N^{-d/2} sum_j u(x_j) exp(+2 pi i k.j / N).
SpectralField forward_dft(const RealField& f);

/// Inverse of forward_dft,
///   u(x_j) = N^{-d/2} sum_k u_hat(k) exp(-2 pi i k.j / N).
/// Throws Error(symmetry_violation) if the input is not Hermitian to within
/// 1e-10 * max|u_hat| (the result would not be real).
RealField inverse_dft(const SpectralField& F);

struct SobolevOrder {
  double s = 0.0;
};

/// Squared discrete H^s norm, rho^{-d/2} sum_k (1 + |k|^2)^s |u_hat(k)|^2.
double sobolev_norm_sq(const SpectralField& F, SobolevOrder s);
double sobolev_norm_sq(const RealField& f, SobolevOrder s);
/// Square root of sobolev_norm_sq.
double discrete_sobolev_norm(const RealField& f, SobolevOrder s);

struct RadialBin {
  int kappa = 0;
  double energy = 0.0;
  long long cardinality = 0;
  std::optional<double> std_error;
};

/// Binned energy density E_N(kappa) on a d = 2 grid.
///
/// Mode k belongs to bin kappa(k) = max(1, ceil|k|), so the bins partition
/// the lattice (DC joins bin 1). Bins run 1..kappa_max = ceil(N / sqrt 2);
/// those above N/2 - 1 collect the corner modes of the square grid.
struct RadialSpectrum {
  GridSpec grid;
  std::vector<RadialBin> bins;  // bins[i].kappa == i + 1

  /// Largest bin index inside the inscribed disc, N/2 - 1.
  int interior_kappa_max() const noexcept { return grid.n() / 2 - 1; }
};

/// Bin index of a lattice mode with squared norm `k_sq`.
int radial_bin(long long k_sq) noexcept;
int radial_kappa_max(int n) noexcept;

RadialSpectrum radial_energy_density(const SpectralField& F);

/// sum_kappa kappa E(kappa) (1 + kappa^2)^s over every bin of R. Equivalent
/// to sobolev_norm_sq up to kappa-independent constants, not equal to it.
double binned_sobolev_norm(const RadialSpectrum& R, SobolevOrder s);

/// True if mode k is removed by the two-thirds rule: max_i |k_i| >= N/3.
bool two_thirds_masked(std::array<int, 2> k, int n) noexcept;

/// Zero every coefficient with max_i |k_i| >= N/3.
SpectralField two_thirds_dealias(const SpectralField& F);

/// Riemann-sum duality pairing rho^{-d/2} sum_j f(x_j) phi(x_j).
double pair_with_test_function(const RealField& f, const RealField& phi);

/// Riemann sums of f over the strips I_k x [-pi, pi), where I_k splits the
/// first axis into n_intervals equal pieces starting at x1 = -pi.
std::vector<double> interval_averages(const RealField& f, int n_intervals);

}  // namespace tspde
