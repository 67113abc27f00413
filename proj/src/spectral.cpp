#include "tspde/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "tspde/error.hpp"

namespace tspde {

namespace {

double parity_sign(std::array<int, 2> k) noexcept {
  return ((k[0] + k[1]) % 2 == 0) ? 1.0 : -1.0;
}

double dft_scale(const GridSpec& g) noexcept {
  return g.dim() == 1 ? 1.0 / std::sqrt(double(g.n())) : 1.0 / g.n();
}

int wrap(int k, int n) noexcept {
  int m = k % n;
  return m < 0 ? m + n : m;
}

}  // namespace

// FFTW's r2c uses exp(-2 pi i k j'/N) with j' = j + N/2 the storage offset.
// The symmetric +i convention on signed indices is then
//   u_hat(k) = N^{-d/2} (-1)^{sum k} conj(Y(k mod N)).
SpectralField forward_dft(const RealField& f) {
  const GridSpec& g = f.grid();
  const int n = g.n();
  const int last = n / 2 + 1;
  detail::RealFft fft(g);
  std::vector<Complex> half(fft.half_size());
  fft.forward(f.values(), half);

  const double scale = dft_scale(g);
  SpectralField out(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto k = g.multi_index(p);
    Complex y;
    if (g.dim() == 1) {
      const int m = wrap(k[0], n);
      y = m <= n / 2 ? std::conj(half[m]) : half[wrap(-k[0], n)];
    } else {
      const int m2 = wrap(k[1], n);
      if (m2 <= n / 2) {
        y = std::conj(half[std::size_t(wrap(k[0], n)) * last + m2]);
      } else {
        y = half[std::size_t(wrap(-k[0], n)) * last + wrap(-k[1], n)];
      }
    }
    out[p] = scale * parity_sign(k) * y;
  }
  // Pairs inside the self-conjugate FFTW columns are computed separately;
  // mirror them so the output is Hermitian to the bit.
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto k = g.multi_index(p);
    const std::size_t q = g.position({-k[0], -k[1]});
    if (q > p) {
      out[q] = std::conj(out[p]);
    } else if (q == p) {
      out[p] = Complex(out[p].real(), 0.0);
    }
  }
  return out;
}

RealField inverse_dft(const SpectralField& F) {
  const GridSpec& g = F.grid();
  const double defect = F.hermitian_defect();
  if (defect > 1e-10 * std::max(F.max_abs(), 1e-300) && defect > 0.0) {
    throw Error(ErrorKind::symmetry_violation,
                "inverse_dft: coefficients are not Hermitian (defect " +
                    std::to_string(defect) + ")");
  }
  const int n = g.n();
  detail::RealFft fft(g);
  std::vector<Complex> half(fft.half_size());
  for (std::size_t p = 0; p < half.size(); ++p) {
    auto k = fft.half_wave_numbers(p);
    if (k[1] == n / 2) k[1] = -n / 2;
    if (g.dim() == 1 && k[0] == n / 2) k[0] = -n / 2;
    half[p] = parity_sign(k) * std::conj(F.at(k));
  }
  RealField out(g);
  fft.inverse(half, out.values());
  const double scale = dft_scale(g);
  for (double& v : out.values()) v *= scale;
  return out;
}

double sobolev_norm_sq(const SpectralField& F, SobolevOrder s) {
  const GridSpec& g = F.grid();
  double sum = 0.0;
  for (std::size_t p = 0; p < F.size(); ++p) {
    const double w = s.s == 0.0 ? 1.0 : std::pow(1.0 + double(g.norm_sq(p)), s.s);
    sum += w * std::norm(F[p]);
  }
  return g.cell_volume() * sum;
}

double sobolev_norm_sq(const RealField& f, SobolevOrder s) {
  return sobolev_norm_sq(forward_dft(f), s);
}

double discrete_sobolev_norm(const RealField& f, SobolevOrder s) {
  return std::sqrt(sobolev_norm_sq(f, s));
}

int radial_bin(long long k_sq) noexcept {
  if (k_sq <= 1) return 1;
  auto r = static_cast<long long>(std::sqrt(double(k_sq)));
  while (r * r > k_sq) --r;
  while ((r + 1) * (r + 1) <= k_sq) ++r;
  return int(r * r == k_sq ? r : r + 1);
}

int radial_kappa_max(int n) noexcept {
  const long long h = n / 2;
  return radial_bin(2 * h * h);
}

RadialSpectrum radial_energy_density(const SpectralField& F) {
  const GridSpec& g = F.grid();
  if (g.dim() != 2) {
    throw Error(ErrorKind::unsupported_dimension,
                "radial_energy_density is defined for d = 2 only");
  }
  const int kmax = radial_kappa_max(g.n());
  std::vector<double> sums(kmax + 1, 0.0);
  std::vector<long long> counts(kmax + 1, 0);
  for (std::size_t p = 0; p < F.size(); ++p) {
    const int b = radial_bin(g.norm_sq(p));
    sums[b] += std::norm(F[p]);
    ++counts[b];
  }
  RadialSpectrum R{g, {}};
  R.bins.reserve(kmax);
  const double inv_rho = g.cell_volume();
  for (int b = 1; b <= kmax; ++b) {
    RadialBin bin;
    bin.kappa = b;
    bin.cardinality = counts[b];
    bin.energy = counts[b] > 0 ? inv_rho * sums[b] / double(counts[b]) : 0.0;
    R.bins.push_back(bin);
  }
  return R;
}

double binned_sobolev_norm(const RadialSpectrum& R, SobolevOrder s) {
  double sum = 0.0;
  for (const auto& b : R.bins) {
    const double kappa = b.kappa;
    sum += kappa * b.energy * std::pow(1.0 + kappa * kappa, s.s);
  }
  return sum;
}

bool two_thirds_masked(std::array<int, 2> k, int n) noexcept {
  const int m = std::max(std::abs(k[0]), std::abs(k[1]));
  return 3 * m >= n;
}

SpectralField two_thirds_dealias(const SpectralField& F) {
  SpectralField out = F;
  const GridSpec& g = F.grid();
  for (std::size_t p = 0; p < out.size(); ++p) {
    if (two_thirds_masked(g.multi_index(p), g.n())) out[p] = Complex{};
  }
  return out;
}

double pair_with_test_function(const RealField& f, const RealField& phi) {
  require_same_grid(f.grid(), phi.grid(), "pair_with_test_function");
  double sum = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) sum += f[p] * phi[p];
  return f.grid().cell_volume() * sum;
}

std::vector<double> interval_averages(const RealField& f, int n_intervals) {
  const GridSpec& g = f.grid();
  if (g.dim() != 2) {
    throw Error(ErrorKind::unsupported_dimension, "interval_averages needs d = 2");
  }
  if (n_intervals < 1 || g.n() % n_intervals != 0) {
    throw Error(ErrorKind::config, "interval_averages: N = " + std::to_string(g.n()) +
                                       " is not divisible by " +
                                       std::to_string(n_intervals));
  }
  const int n = g.n();
  const int width = n / n_intervals;
  std::vector<double> out(n_intervals, 0.0);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += f[std::size_t(i) * n + j];
    out[i / width] += row;
  }
  for (double& v : out) v *= g.cell_volume();
  return out;
}

}  // namespace tspde
