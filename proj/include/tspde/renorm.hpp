#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tspde/spectral.hpp"

namespace tspde {

/// Covariance of an Ornstein-Uhlenbeck mode started at 0,
///   (sigma^2 / 2mu) exp(-mu lag) (1 - exp(-2 mu t)).
/// t may be +infinity.
double ou_covariance(double mu, double sigma, double t, double lag);

enum class SeriesClass { convergent, divergent };
enum class LimitClass { zero, finite, infinite };

const char* to_string(SeriesClass c) noexcept;
const char* to_string(LimitClass c) noexcept;

struct HeatSeries {
  double partial_sum;
  SeriesClass classification;
};

/// sum_{|k| <= K, k in Z^d} (1 + |k|^2)^s (sigma^2 / 2 mu_k)(1 - exp(-2 mu_k t)),
/// mu_k = 1 + |k|^2, with t = +infinity allowed. The classification is the
/// analytic one: convergent iff s < 1 - d/2. Summation supports d in {1, 2}.
HeatSeries heat_norm_series(int d, double sigma, double t, SobolevOrder s, int truncation);

struct RenormResult {
  double C_N;
  double shift;  // C_N - 1 without the rounding of C_N
  int N;
  double sigma;
  double residual;
  int iterations;
};

/// Right-hand side F(C) = (3 sigma^2 / 8 pi^2) sum_{|k| <= N} 1 / (C - 1 + |k|^2).
double renorm_rhs(double C, double sigma, int N);

/// Unique fixed point C_N > 1 of C = F(C), by bisection on
/// (1 + 1e-12, 1 + (3 sigma^2 / 8 pi^2) #modes]. Throws Error(domain) for
/// sigma <= 0 or N < 2 and Error(numerical) if the residual exceeds 1e-10.
RenormResult solve_CN(double sigma, int N);

struct AsymptoticCN {
  double refined;  // root of C = (3 sigma^2 / 4 pi)(log N - log(C) / 2)
  double leading;  // (3 sigma^2 / 4 pi) log N
};

AsymptoticCN asymptotic_CN(double sigma, double N);

/// sigma^2 / (2 (C_N - 1 + |k|^2)) for |k| <= N, else 0.
double predicted_mode_energy(long long k_sq, int N, double sigma);
double predicted_mode_energy(long long k_sq, const RenormResult& cn);

struct PredictedNorm {
  double value;
  LimitClass limit;  // infinite for s >= 0, zero for s < 0
};

/// sum_{|k| <= N} (1 + |k|^2)^s sigma^2 / (2 (C_N - 1 + |k|^2)).
PredictedNorm predicted_norm(SobolevOrder s, int N, double sigma);

/// R(c) = int x^2 e^{-c(x^2-1)^2} dx / int e^{-c(x^2-1)^2} dx over [0, inf),
/// by adaptive Gauss-Kronrod on [0, 1] and [1, x_max] where the integrand
/// falls below 1e-300. Throws Error(domain) for c <= 0.
double stationary_moment_quadrature(double c);
/// Same ratio by adaptive Simpson; an independent second rule.
double stationary_moment_simpson(double c);

/// P(c) = sqrt(c) R(c) in closed form through modified Bessel functions
/// of order +-1/4, +-3/4 at c/2, exponentially scaled so large c is safe.
/// Throws Error(domain) for c <= 0.
double stationary_moment_bessel(double c);

/// The Bessel-K expression sqrt(c) / (2 K_{1/4}(c/2)) (K_{3/4} - K_{1/4})(c/2)
/// as it is often quoted; kept for comparison only.
double stationary_moment_bessel_k_form(double c);

/// c for the decoupled equation with reaction rate g: g / (2 sigma^2 rho^{d/2})
/// = g (2 pi)^d / (2 sigma^2 N^d).
double stationary_constant(int d, int N, double sigma, double g = 1.0);

/// Stationary law p(x) = exp(-c (x^2 - 1)^2) / Z of one site of the
/// decoupled equation.
class StationaryDensity {
 public:
  StationaryDensity(int d, int N, double sigma, double g = 1.0);

  double sigma() const noexcept { return sigma_; }
  double rho() const noexcept { return rho_; }
  int dim() const noexcept { return d_; }
  double g() const noexcept { return g_; }
  double c() const noexcept { return c_; }
  /// Z = int_R exp(-c (x^2 - 1)^2) dx.
  double normalization() const noexcept { return z_; }
  double pdf(double x) const noexcept;
  /// E x^2 = R(c).
  double second_moment() const;

 private:
  int d_;
  double sigma_, rho_, g_, c_, z_;
};

struct ScalingPrediction {
  double expected_norm_sq;
  LimitClass limit;
};

/// Expected squared discrete H^s norm of the stationary decoupled field,
/// rho^{-d/2} R(c) sum_{k on the grid} (1 + |k|^2)^s, since every mode has
/// E|u_hat(k)|^2 = R(c). Grows like N^{2s + d/2}; limit zero for s < -d/4,
/// finite at s = -d/4, infinite above.
ScalingPrediction theorem2_scaling(SobolevOrder s, int d, int N, double sigma,
                                   double g = 1.0);

struct PredictionCurve {
  std::string source;
  std::vector<double> x;
  std::vector<double> value;
};

PredictionCurve cn_curve(double sigma, const std::vector<int>& Ns);
PredictionCurve mode_energy_curve(double sigma, int N, int kappa_max);
PredictionCurve norm_curve(double sigma, const std::vector<int>& Ns, SobolevOrder s = {0.0});
PredictionCurve heat_series_curve(double sigma, const std::vector<int>& Ks, int d = 2);

}  // namespace tspde
