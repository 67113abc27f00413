#include "tspde/renorm.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "tspde/error.hpp"
#include "tspde/lattice.hpp"
#include "tspde/quadrature.hpp"

namespace tspde {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int shell_limit = 2048;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::domain, std::string(what) + " must be finite and > 0");
  }
}

// sum_{|k| <= N} f(|k|^2) over a disc of Z^2, shells up to shell_limit and
// quadrant rows beyond.
class DiscSum {
 public:
  explicit DiscSum(int radius) : radius_(radius) {
    if (radius <= shell_limit) shells_ = disc_shells(radius);
  }

  template <class F>
  double operator()(F&& f) const {
    if (!shells_.empty()) return shell_sum(shells_, f);
    const long long r2 = 1LL * radius_ * radius_;
    NeumaierSum s;
    for (long long k1 = radius_; k1 >= 0; --k1) {
      const long long m = isqrt(r2 - k1 * k1);
      const double w1 = k1 > 0 ? 2.0 : 1.0;
      NeumaierSum row;
      for (long long k2 = m; k2 >= 1; --k2) row.add(2.0 * f(k1 * k1 + k2 * k2));
      row.add(f(k1 * k1));
      s.add(w1 * row.value());
    }
    return s.value();
  }

  double inverse_sum(double a) const {
    if (shells_.empty()) return disc_inverse_sum_rows(a, radius_);
    NeumaierSum s;
    for (auto it = shells_.rbegin(); it != shells_.rend(); ++it) {
      s.add(double(it->count) / (a + double(it->norm_sq)));
    }
    return s.value();
  }

 private:
  int radius_;
  std::vector<LatticeShell> shells_;
};

double prefactor(double sigma) { return 3.0 * sigma * sigma / (8.0 * pi * pi); }

void quiet_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

double gsl_checked(int status, const gsl_sf_result& r, const char* what) {
  if (status != GSL_SUCCESS || !std::isfinite(r.val)) {
    throw Error(ErrorKind::numerical, std::string(what) + ": " + gsl_strerror(status));
  }
  return r.val;
}

double i_scaled(double nu, double x) {
  gsl_sf_result r;
  return gsl_checked(gsl_sf_bessel_Inu_scaled_e(nu, x, &r), r, "Inu_scaled");
}

double k_scaled(double nu, double x) {
  gsl_sf_result r;
  return gsl_checked(gsl_sf_bessel_Knu_scaled_e(nu, x, &r), r, "Knu_scaled");
}

// e^{-x} I_{-nu}(x) = e^{-x} I_nu(x) + (2/pi) sin(nu pi) e^{-2x} e^{x} K_nu(x)
double i_scaled_negative(double nu, double x) {
  return i_scaled(nu, x) + (2.0 / pi) * std::sin(nu * pi) * std::exp(-2.0 * x) * k_scaled(nu, x);
}

double well_cutoff(double c) { return std::sqrt(1.0 + std::sqrt(690.0 / c)); }

}  // namespace

const char* to_string(SeriesClass c) noexcept {
  return c == SeriesClass::convergent ? "convergent" : "divergent";
}

const char* to_string(LimitClass c) noexcept {
  switch (c) {
    case LimitClass::zero: return "zero";
    case LimitClass::finite: return "finite";
    case LimitClass::infinite: return "infinite";
  }
  return "?";
}

double ou_covariance(double mu, double sigma, double t, double lag) {
  require_positive(mu, "mu");
  if (!(t >= 0.0)) throw Error(ErrorKind::domain, "t must be >= 0");
  if (!(lag >= 0.0)) throw Error(ErrorKind::domain, "lag must be >= 0");
  const double growth = std::isinf(t) ? 1.0 : -std::expm1(-2.0 * mu * t);
  return sigma * sigma / (2.0 * mu) * std::exp(-mu * lag) * growth;
}

HeatSeries heat_norm_series(int d, double sigma, double t, SobolevOrder s, int truncation) {
  if (truncation < 1) throw Error(ErrorKind::config, "truncation K must be >= 1");
  if (!(t >= 0.0)) throw Error(ErrorKind::domain, "t must be >= 0");
  if (d < 1) throw Error(ErrorKind::config, "dimension must be >= 1");
  const SeriesClass cls =
      s.s < 1.0 - d / 2.0 ? SeriesClass::convergent : SeriesClass::divergent;
  if (sigma == 0.0) return {0.0, cls};
  auto term = [&](long long n) {
    const double mu = 1.0 + double(n);
    const double growth = std::isinf(t) ? 1.0 : -std::expm1(-2.0 * mu * t);
    const double weight = s.s == 0.0 ? 1.0 : std::pow(mu, s.s);
    return weight * sigma * sigma / (2.0 * mu) * growth;
  };
  if (d == 1) {
    NeumaierSum sum;
    for (long long k = truncation; k >= 1; --k) sum.add(2.0 * term(k * k));
    sum.add(term(0));
    return {sum.value(), cls};
  }
  if (d == 2) return {DiscSum(truncation)(term), cls};
  throw Error(ErrorKind::unsupported_dimension, "heat_norm_series sums d = 1, 2 only");
}

double renorm_rhs(double C, double sigma, int N) {
  if (!(C > 1.0)) throw Error(ErrorKind::domain, "C must exceed 1");
  return prefactor(sigma) * DiscSum(N).inverse_sum(C - 1.0);
}

RenormResult solve_CN(double sigma, int N) {
  require_positive(sigma, "sigma");
  if (N < 2) throw Error(ErrorKind::domain, "N must be >= 2");
  const DiscSum disc(N);
  const double A = prefactor(sigma);
  // Bisect on the shift C - 1 so that tiny sigma keeps full resolution.
  auto G = [&](double shift) { return 1.0 + shift - A * disc.inverse_sum(shift); };

  double lo = std::min(1e-12, 0.5 * A);
  double hi = A * double(disc_mode_count(N));
  double g_lo = G(lo);
  double g_hi = G(hi);
  if (!(g_lo < 0.0 && g_hi >= 0.0)) {
    throw Error(ErrorKind::numerical, "C_N bracket does not enclose a sign change");
  }
  int it = 0;
  for (; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = G(mid);
    if (gm < 0.0) {
      lo = mid;
      g_lo = gm;
    } else {
      hi = mid;
      g_hi = gm;
    }
  }
  RenormResult r;
  r.N = N;
  r.sigma = sigma;
  r.iterations = it;
  const bool take_lo = std::abs(g_lo) < std::abs(g_hi);
  r.shift = take_lo ? lo : hi;
  r.C_N = 1.0 + r.shift;
  r.residual = std::abs(take_lo ? g_lo : g_hi);
  if (!(r.residual < 1e-10)) {
    throw Error(ErrorKind::numerical,
                "C_N residual " + std::to_string(r.residual) + " above tolerance");
  }
  return r;
}

AsymptoticCN asymptotic_CN(double sigma, double N) {
  if (!(N >= 2.0)) throw Error(ErrorKind::domain, "N must be >= 2");
  const double B = 3.0 * sigma * sigma / (4.0 * pi);
  const double logN = std::log(N);
  AsymptoticCN out{0.0, B * logN};
  if (B == 0.0) return out;
  // h(C) = C - B (log N - log(C) / 2) is increasing; bisect on log C.
  auto h = [&](double lc) { return std::exp(lc) - B * (logN - 0.5 * lc); };
  double lo = -700.0;
  double hi = std::log(std::max(1.0, B * logN)) + 1.0;
  while (h(hi) < 0.0) hi += 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  out.refined = std::exp(0.5 * (lo + hi));
  return out;
}

double predicted_mode_energy(long long k_sq, const RenormResult& cn) {
  if (k_sq < 0) throw Error(ErrorKind::domain, "|k|^2 must be >= 0");
  if (k_sq > 1LL * cn.N * cn.N) return 0.0;
  return cn.sigma * cn.sigma / (2.0 * (cn.shift + double(k_sq)));
}

double predicted_mode_energy(long long k_sq, int N, double sigma) {
  return predicted_mode_energy(k_sq, solve_CN(sigma, N));
}

PredictedNorm predicted_norm(SobolevOrder s, int N, double sigma) {
  const RenormResult cn = solve_CN(sigma, N);
  const double shift = cn.shift;
  const double value = DiscSum(N)([&](long long n) {
    const double weight = s.s == 0.0 ? 1.0 : std::pow(1.0 + double(n), s.s);
    return weight * sigma * sigma / (2.0 * (shift + double(n)));
  });
  return {value, s.s >= 0.0 ? LimitClass::infinite : LimitClass::zero};
}

// ---------------------------------------------------------------------------

double stationary_moment_quadrature(double c) {
  require_positive(c, "c");
  auto w = [c](double x) {
    const double y = x * x - 1.0;
    return std::exp(-c * y * y);
  };
  auto xw = [&](double x) { return x * x * w(x); };
  const double xmax = well_cutoff(c);
  auto gk = [](auto f, double a, double b) {
    const auto r = integrate_gk15(f, a, b, 1e-12, 1e-14);
    if (!r.converged) throw Error(ErrorKind::numerical, "quadrature did not converge");
    return r.value;
  };
  const double num = gk(xw, 0.0, 1.0) + gk(xw, 1.0, xmax);
  const double den = gk(w, 0.0, 1.0) + gk(w, 1.0, xmax);
  return num / den;
}

double stationary_moment_simpson(double c) {
  require_positive(c, "c");
  auto w = [c](double x) {
    const double y = x * x - 1.0;
    return std::exp(-c * y * y);
  };
  auto xw = [&](double x) { return x * x * w(x); };
  const double xmax = well_cutoff(c);
  auto simpson = [](auto f, double a, double b, double tol) {
    return integrate_simpson(f, a, b, tol).value;
  };
  const double den0 = simpson(w, 0.0, 1.0, 1e-14) + simpson(w, 1.0, xmax, 1e-14);
  const double tol = 1e-14 * std::max(1.0, den0);
  const double num = simpson(xw, 0.0, 1.0, tol) + simpson(xw, 1.0, xmax, tol * xmax * xmax);
  const double den = simpson(w, 0.0, 1.0, tol) + simpson(w, 1.0, xmax, tol);
  return num / den;
}

double stationary_moment_bessel(double c) {
  require_positive(c, "c");
  quiet_gsl();
  const double x = 0.5 * c;
  const double i14 = i_scaled(0.25, x);
  const double i34 = i_scaled(0.75, x);
  const double im14 = i_scaled_negative(0.25, x);
  const double im34 = i_scaled_negative(0.75, x);
  return 0.5 * std::sqrt(c) * (im34 + i34 + i14 + im14) / (im14 + i14);
}

double stationary_moment_bessel_k_form(double c) {
  require_positive(c, "c");
  quiet_gsl();
  const double x = 0.5 * c;
  const double k14 = k_scaled(0.25, x);
  const double k34 = k_scaled(0.75, x);
  return std::sqrt(c) / (2.0 * k14) * (k34 - k14);
}

double stationary_constant(int d, int N, double sigma, double g) {
  require_positive(sigma, "sigma");
  require_positive(g, "g");
  if (N < 2) throw Error(ErrorKind::domain, "N must be >= 2");
  return g * std::pow(2.0 * pi, d) / (2.0 * sigma * sigma * std::pow(double(N), d));
}

// ---------------------------------------------------------------------------

StationaryDensity::StationaryDensity(int d, int N, double sigma, double g)
    : d_(d), sigma_(sigma), rho_(std::pow(N / (2.0 * pi), 2)), g_(g),
      c_(stationary_constant(d, N, sigma, g)) {
  auto w = [c = c_](double x) {
    const double y = x * x - 1.0;
    return std::exp(-c * y * y);
  };
  const double xmax = well_cutoff(c_);
  z_ = 2.0 * (integrate_gk15(w, 0.0, 1.0).value + integrate_gk15(w, 1.0, xmax).value);
}

double StationaryDensity::pdf(double x) const noexcept {
  const double y = x * x - 1.0;
  return std::exp(-c_ * y * y) / z_;
}

double StationaryDensity::second_moment() const { return stationary_moment_quadrature(c_); }

ScalingPrediction theorem2_scaling(SobolevOrder s, int d, int N, double sigma, double g) {
  if (d != 1 && d != 2) {
    throw Error(ErrorKind::unsupported_dimension, "theorem2_scaling supports d = 1, 2");
  }
  if (N < 2 || N % 2 != 0) throw Error(ErrorKind::domain, "N must be even and >= 2");
  const double c = stationary_constant(d, N, sigma, g);
  const double R = stationary_moment_quadrature(c);
  auto weight = [&](long long n) {
    return s.s == 0.0 ? 1.0 : std::pow(1.0 + double(n), s.s);
  };
  const int h = N / 2;
  NeumaierSum sum;
  if (d == 1) {
    for (int k = -h; k < h; ++k) sum.add(weight(1LL * k * k));
  } else {
    for (int k1 = -h; k1 < h; ++k1) {
      NeumaierSum row;
      for (int k2 = -h; k2 < h; ++k2) row.add(weight(1LL * k1 * k1 + 1LL * k2 * k2));
      sum.add(row.value());
    }
  }
  const double rho = std::pow(N / (2.0 * pi), 2);
  const double critical = -d / 4.0;
  LimitClass limit = LimitClass::infinite;
  if (std::abs(s.s - critical) < 1e-12) {
    limit = LimitClass::finite;
  } else if (s.s < critical) {
    limit = LimitClass::zero;
  }
  return {std::pow(rho, -d / 2.0) * R * sum.value(), limit};
}

// ---------------------------------------------------------------------------

PredictionCurve cn_curve(double sigma, const std::vector<int>& Ns) {
  PredictionCurve c{"cn_fixed_point", {}, {}};
  for (int n : Ns) {
    c.x.push_back(n);
    c.value.push_back(solve_CN(sigma, n).C_N);
  }
  return c;
}

PredictionCurve mode_energy_curve(double sigma, int N, int kappa_max) {
  PredictionCurve c{"mode_energy", {}, {}};
  const RenormResult cn = solve_CN(sigma, N);
  for (int k = 1; k <= kappa_max; ++k) {
    c.x.push_back(k);
    c.value.push_back(predicted_mode_energy(1LL * k * k, cn));
  }
  return c;
}

PredictionCurve norm_curve(double sigma, const std::vector<int>& Ns, SobolevOrder s) {
  PredictionCurve c{"predicted_norm_s=" + std::to_string(s.s), {}, {}};
  for (int n : Ns) {
    c.x.push_back(n);
    c.value.push_back(predicted_norm(s, n, sigma).value);
  }
  return c;
}

PredictionCurve heat_series_curve(double sigma, const std::vector<int>& Ks, int d) {
  PredictionCurve c{"heat_series_d" + std::to_string(d), {}, {}};
  const double inf = std::numeric_limits<double>::infinity();
  for (int k : Ks) {
    c.x.push_back(k);
    c.value.push_back(heat_norm_series(d, sigma, inf, {0.0}, k).partial_sum);
  }
  return c;
}

}  // namespace tspde
