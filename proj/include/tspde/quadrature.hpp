#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace tspde {

/// Compensated (Neumaier) running sum.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

namespace detail {

struct GkPanel {
  double a, b, value, error;
  bool operator<(const GkPanel& o) const noexcept { return error < o.error; }
};

template <class F>
GkPanel gauss_kronrod_15(F& f, double a, double b) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = wk[7] * fc;
  double gauss = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * xk[i];
    const double s = f(c - dx) + f(c + dx);
    kronrod += wk[i] * s;
    if (i % 2 == 1) gauss += wg[i / 2] * s;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth, int& panels) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    ++panels;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, panels) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, panels);
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod quadrature: the panel with the
/// largest error estimate is bisected until the total estimate drops below
/// max(abs_tol, rel_tol |I|).
template <class F>
QuadratureResult integrate_gk15(F&& f, double a, double b, double abs_tol = 1e-12,
                                double rel_tol = 1e-13, int max_panels = 20000) {
  std::priority_queue<detail::GkPanel> heap;
  heap.push(detail::gauss_kronrod_15(f, a, b));
  double total = heap.top().value;
  double err = heap.top().error;
  QuadratureResult r;
  while (true) {
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) {
      r.converged = true;
      break;
    }
    if (int(heap.size()) >= max_panels) break;
    const detail::GkPanel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
  }
  // Re-add from the panels to shed the drift of the running updates.
  NeumaierSum v, e;
  r.panels = int(heap.size());
  while (!heap.empty()) {
    v.add(heap.top().value);
    e.add(heap.top().error);
    heap.pop();
  }
  r.value = v.value();
  r.error = e.value();
  return r;
}

/// Recursive adaptive Simpson rule with Richardson correction.
template <class F>
QuadratureResult integrate_simpson(F&& f, double a, double b, double tol = 1e-12,
                                   int max_depth = 50) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  QuadratureResult r;
  r.value = detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth, r.panels);
  r.error = tol;
  r.converged = true;
  return r;
}

}  // namespace tspde
