#include "tspde/lattice.hpp"

#include <cmath>
#include <numbers>

#include "tspde/error.hpp"

namespace tspde {

long long isqrt(long long n) noexcept {
  if (n <= 0) return 0;
  long long r = static_cast<long long>(std::sqrt(double(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<LatticeShell> disc_shells(int radius) {
  if (radius < 0) throw Error(ErrorKind::config, "disc radius must be >= 0");
  const long long r2 = 1LL * radius * radius;
  std::vector<std::uint32_t> counts(std::size_t(r2) + 1, 0);
  for (long long k1 = 0; k1 <= radius; ++k1) {
    const long long m = isqrt(r2 - k1 * k1);
    const std::uint32_t w1 = k1 > 0 ? 2 : 1;
    counts[std::size_t(k1 * k1)] += w1;
    for (long long k2 = 1; k2 <= m; ++k2) counts[std::size_t(k1 * k1 + k2 * k2)] += 2 * w1;
  }
  std::vector<LatticeShell> shells;
  for (std::size_t n = 0; n < counts.size(); ++n) {
    if (counts[n]) shells.push_back({static_cast<long long>(n), counts[n]});
  }
  return shells;
}

long long disc_mode_count(int radius) noexcept {
  const long long r2 = 1LL * radius * radius;
  long long total = 0;
  for (long long k1 = -radius; k1 <= radius; ++k1) total += 2 * isqrt(r2 - k1 * k1) + 1;
  return total;
}

namespace {

// sum_{|k| <= m} 1 / (b + k^2)
double row_sum(double b, long long m) {
  if (m <= 64) {
    NeumaierSum s;
    for (long long k = m; k >= 1; --k) s.add(2.0 / (b + double(k * k)));
    s.add(1.0 / b);
    return s.value();
  }
  const double rb = std::sqrt(b);
  const double full = std::numbers::pi / (std::tanh(std::numbers::pi * rb) * rb);
  // Euler-Maclaurin for sum_{k > m} f(k), f(x) = 1 / (b + x^2).
  const double x = double(m + 1);
  const double q = b + x * x;
  const double f = 1.0 / q;
  const double f1 = -2.0 * x / (q * q);
  const double f3 = 24.0 * x * (b - x * x) / (q * q * q * q);
  const double integral = std::atan(rb / x) / rb;
  const double tail = integral + 0.5 * f - f1 / 12.0 + f3 / 720.0;
  return full - 2.0 * tail;
}

}  // namespace

double disc_inverse_sum_rows(double a, int radius) {
  if (!(a > 0.0)) throw Error(ErrorKind::domain, "disc_inverse_sum_rows needs a > 0");
  const long long r2 = 1LL * radius * radius;
  NeumaierSum s;
  for (long long k1 = radius; k1 >= 1; --k1) {
    s.add(2.0 * row_sum(a + double(k1 * k1), isqrt(r2 - k1 * k1)));
  }
  s.add(row_sum(a, radius));
  return s.value();
}

}  // namespace tspde
