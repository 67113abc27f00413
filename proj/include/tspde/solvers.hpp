#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tspde/grid.hpp"
#include "tspde/noise.hpp"

namespace tspde {

namespace detail {
class RealFft;
}

enum class Equation { heat, decoupled_ac, allen_cahn };

const char* to_string(Equation eq) noexcept;
/// Accepts "heat", "dac"/"decoupled_ac", "ac"/"allen_cahn".
Equation parse_equation(const std::string& name);

/// Time-stepping parameters for
///   heat:          du = (alpha Lap u - g u) dt + sigma dW
///   decoupled_ac:  du = g (u - u^3) dt + sigma dW       (per site)
///   allen_cahn:    du = (alpha Lap u + g (u - u^3)) dt + sigma dW
struct SchemeConfig {
  Equation equation = Equation::heat;
  double alpha = 0.0;
  double g = 0.0;
  double sigma = 0.0;
  double t_final = 1.0;
  std::int64_t steps = 1;
  /// Two-thirds dealiasing of the cubic term (allen_cahn only).
  bool dealias = true;

  double dt() const noexcept { return t_final / double(steps); }
  /// Default dealias flag: on for allen_cahn, off otherwise.
  static bool default_dealias(Equation eq) noexcept { return eq == Equation::allen_cahn; }
  /// Throws Error(config) on negative rates, t_final <= 0 or steps < 0.
  void validate() const;
};

class InitialCondition {
 public:
  using Function = std::function<double(double x1, double x2)>;

  static InitialCondition zero();
  static InitialCondition sampled(Function fn, std::string label);
  static InitialCondition sin_2x();
  static InitialCondition snapshot(RealField field, std::string label = "snapshot");

  /// Sample onto the grid; snapshots must already live on it.
  RealField on(const GridSpec& grid) const;
  const std::string& label() const noexcept { return label_; }

 private:
  InitialCondition(std::variant<std::monostate, Function, RealField> v, std::string label)
      : source_(std::move(v)), label_(std::move(label)) {}

  std::variant<std::monostate, Function, RealField> source_;
  std::string label_;
};

/// Field of one realization at step m. Heat and Allen-Cahn states hold the
/// unnormalized FFTW half spectrum (sign -1, storage-origin phase); the
/// decoupled state holds grid values.
class SolverState {
 public:
  std::int64_t step() const noexcept { return step_; }
  const GridSpec& grid() const noexcept { return grid_; }
  bool is_spectral() const noexcept { return spectral_; }

  /// Real-space field at the current step.
  RealField real_field() const;
  /// Coefficients in the symmetric convention of forward_dft.
  SpectralField spectral_field() const;
  /// Raw half spectrum (empty for direct-space states).
  std::span<const Complex> half_spectrum() const noexcept { return half_; }

 private:
  friend class ImexScheme;
  SolverState(GridSpec grid, bool spectral) : grid_(grid), spectral_(spectral) {}

  GridSpec grid_;
  bool spectral_;
  std::int64_t step_ = 0;
  std::vector<Complex> half_;
  std::vector<double> direct_;
};

/// Implicit-explicit stepping: trapezoidal rule on the linear part,
/// explicit Euler-Maruyama on the cubic and the noise. Per-mode implicit
/// factors are computed once at construction; a vanishing factor throws
/// Error(singular_factor).
class ImexScheme {
 public:
  ImexScheme(const SchemeConfig& config, const GridSpec& grid);
  ~ImexScheme();
  ImexScheme(ImexScheme&&) noexcept;
  ImexScheme& operator=(ImexScheme&&) noexcept;

  const SchemeConfig& config() const noexcept { return config_; }
  const GridSpec& grid() const noexcept { return grid_; }

  SolverState initial_state(const RealField& u0) const;

  /// u_hat <- [(1 - a dt/2) u_hat + w_hat] / (1 + a dt/2), a = g + alpha |k|^2.
  void heat_step(SolverState& state, const NoiseIncrement& noise);
  /// u <- [u (1 + g dt/2) - g dt u^3 + w] / (1 - g dt/2), per site.
  void decoupled_step(SolverState& state, const NoiseIncrement& noise);
  /// u_hat <- [(1 + b dt/2) u_hat - g dt <u^3, e_k> + w_hat] / (1 - b dt/2),
  /// b = g - alpha |k|^2; the cubic is FFT(IFFT(u_hat)^3), with modes
  /// max|k_i| >= N/3 removed when dealiasing is on.
  void allen_cahn_step(SolverState& state, const NoiseIncrement& noise);

  /// Dispatch on the configured equation with a raw direct-space increment.
  void step(SolverState& state, std::span<const double> noise);

 private:
  void require(Equation eq, const char* op) const;
  void spectral_linear_step(SolverState& state, std::span<const double> noise, bool cubic);
  void decoupled_kernel(SolverState& state, std::span<const double> noise) const;

  SchemeConfig config_;
  GridSpec grid_;
  std::unique_ptr<detail::RealFft> fft_;
  std::vector<double> explicit_factor_;  // per half-spectrum mode
  std::vector<double> inverse_implicit_;
  std::vector<unsigned char> cubic_mask_;
  std::vector<Complex> work_half_;
  std::vector<Complex> noise_half_;
  std::vector<double> work_real_;
};

struct Snapshot {
  std::int64_t step;
  double time;
  RealField field;
};

struct IntegrationResult {
  RealField final_field;
  std::vector<Snapshot> snapshots;
};

/// Apply config.steps steps, consuming increments 0..M-1 of the stream in
/// `noise`, and return the field at t_final. Snapshots are taken after the
/// listed step indices (0 = initial state).
IntegrationResult integrate(const SchemeConfig& config, const InitialCondition& ic,
                            const NoiseSpec& noise, const GridSpec& grid,
                            std::span<const std::int64_t> snapshot_steps = {});

/// Same, but drawing increments from an explicit noise path whose step
/// must equal config.dt().
RealField integrate_on_path(const SchemeConfig& config, const RealField& u0,
                            NoisePath& path);

struct ConvergenceReport {
  double diff_coarse;  // |u_{2dt} - u_{dt}|_0
  double diff_fine;    // |u_{dt} - u_{dt/2}|_0
  double ratio;        // diff_coarse / diff_fine; NaN when both vanish
};

/// Integrate with steps 2dt, dt and dt/2 on one Wiener path (finest
/// increments aggregated) and compare in the discrete L2 norm.
/// Requires config.steps even.
ConvergenceReport self_convergence_check(const SchemeConfig& config,
                                         const InitialCondition& ic,
                                         const NoiseSpec& noise, const GridSpec& grid);

}  // namespace tspde
