#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tspde/noise.hpp"
#include "tspde/renorm.hpp"
#include "tspde/solvers.hpp"

namespace tspde {

struct ExperimentConfig {
  std::string preset = "custom";
  SchemeConfig scheme;
  InitialCondition ic = InitialCondition::zero();
  int dim = 2;
  std::vector<int> grid_sizes;
  int realizations = 1;
  std::uint64_t master_seed = 0;
  /// Strips for interval averages (d = 2); 0 disables them.
  int intervals = 0;
  /// 0 = one worker per hardware thread.
  int workers = 0;
  std::filesystem::path output_dir;

  /// Throws Error(config) on an empty grid list, odd N or no realizations.
  void validate() const;
};

/// Master seed of the sub-ensemble on the N-point grid; realization r of
/// that sub-ensemble uses stream_key(grid_seed(master, N), r).
std::uint64_t grid_seed(std::uint64_t master_seed, int N) noexcept;

NoiseSpec realization_noise(const ExperimentConfig& config, int N, int realization);

struct MeanStderr {
  double mean = 0.0;
  double stderr_mean = 0.0;  // sample standard deviation / sqrt(n)
};

struct SpectrumStats {
  int N = 0;
  std::vector<int> kappa;
  std::vector<MeanStderr> energy;
  std::vector<long long> cardinality;

  /// Largest standard error over the interior bins.
  double largest_stderr() const noexcept;
};

struct GridStats {
  int N = 0;
  int realizations = 0;
  /// Spectra and intervals are present for d = 2 only.
  std::optional<SpectrumStats> spectrum;
  std::vector<MeanStderr> intervals;
  MeanStderr l2_norm_sq;      // |u(T)|_0^2
  MeanStderr site_moment;     // mean over sites of u(T)^2
  /// Final field of realization 0.
  std::optional<RealField> sample_field;
};

struct EnsembleStats {
  std::vector<GridStats> grids;

  const GridStats& at(int N) const;
};

/// Per-realization measurements on one grid.
struct Observation {
  std::vector<double> energy;  // bins 1..kappa_max
  std::vector<double> intervals;
  double l2_norm_sq = 0.0;
  double site_moment = 0.0;
};

/// Integrate one realization and measure it.
Observation observe_realization(const ExperimentConfig& config, int N, int realization,
                                RealField* final_field = nullptr);

/// Mean and standard error of the sample in index order.
MeanStderr mean_stderr(const std::vector<double>& xs);

/// Runs every (N, realization) over a pool of workers and reduces in
/// realization order, so the result does not depend on the worker count.
/// A failing realization aborts the run with its error.
EnsembleStats run_ensemble(const ExperimentConfig& config);

struct LoglogFit {
  double slope;
  double intercept;
  double r_squared;
  int points;
};

/// Least-squares fit of log y against log x.
LoglogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log mean E_N(kappa) over kappa_min <= kappa <= kappa_max. Needs at
/// least three bins (Error(config)) with positive energies (Error(domain)).
LoglogFit fit_loglog_slope(const EnsembleStats& stats, int N, int kappa_min, int kappa_max);
LoglogFit fit_loglog_slope(const SpectrumStats& spectrum, int kappa_min, int kappa_max);

/// Least-squares slope of y against x.
double linear_slope(const std::vector<double>& x, const std::vector<double>& y);

struct OverlayRow {
  double x;
  double measured;
  double predicted;
  std::optional<double> ratio;  // empty when the prediction is 0
};

/// Join on shared abscissae. Error(axis_mismatch) if there are none.
std::vector<OverlayRow> overlay_prediction(const std::vector<double>& x,
                                           const std::vector<double>& measured,
                                           const PredictionCurve& curve);
std::vector<OverlayRow> overlay_prediction(const SpectrumStats& spectrum,
                                           const PredictionCurve& curve);

}  // namespace tspde
