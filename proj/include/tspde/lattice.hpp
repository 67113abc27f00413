#pragma once

#include <cstdint>
#include <vector>

namespace tspde {

/// Integer square root, floor(sqrt(n)) for n >= 0.
long long isqrt(long long n) noexcept;

/// A circle |k|^2 = norm_sq of the lattice Z^2 and its number of points.
struct LatticeShell {
  long long norm_sq;
  long long count;
};

/// Every nonempty shell with norm_sq <= radius^2, in increasing order.
std::vector<LatticeShell> disc_shells(int radius);

/// Number of k in Z^2 with |k| <= radius.
long long disc_mode_count(int radius) noexcept;

/// sum over shells of count * f(norm_sq), compensated.
template <class F>
double shell_sum(const std::vector<LatticeShell>& shells, F&& f);

/// sum_{|k| <= radius} 1 / (a + |k|^2) for a > 0, row by row with the
/// closed form pi coth(pi sqrt b) / sqrt b for each full row and an
/// Euler-Maclaurin tail. Cost O(radius).
double disc_inverse_sum_rows(double a, int radius);

}  // namespace tspde

#include "tspde/quadrature.hpp"

template <class F>
double tspde::shell_sum(const std::vector<LatticeShell>& shells, F&& f) {
  NeumaierSum s;
  for (const auto& sh : shells) s.add(double(sh.count) * f(sh.norm_sq));
  return s.value();
}
