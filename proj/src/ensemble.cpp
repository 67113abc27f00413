#include "tspde/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include "tspde/error.hpp"
#include "tspde/rng.hpp"
#include "tspde/spectral.hpp"

namespace tspde {

void ExperimentConfig::validate() const {
  scheme.validate();
  if (grid_sizes.empty()) throw Error(ErrorKind::config, "experiment needs at least one N");
  for (int n : grid_sizes) {
    if (n < 2 || n % 2 != 0) {
      throw Error(ErrorKind::config, "grid size N = " + std::to_string(n) + " must be even");
    }
  }
  if (realizations < 1) throw Error(ErrorKind::config, "realization count must be >= 1");
  if (dim != 1 && dim != 2) throw Error(ErrorKind::config, "dimension must be 1 or 2");
  if (intervals < 0) throw Error(ErrorKind::config, "interval count must be >= 0");
  if (workers < 0) throw Error(ErrorKind::config, "worker count must be >= 0");
}

std::uint64_t grid_seed(std::uint64_t master_seed, int N) noexcept {
  return stream_key(master_seed, 0x4e00000000000000ULL + std::uint64_t(N));
}

NoiseSpec realization_noise(const ExperimentConfig& config, int N, int realization) {
  return {config.scheme.sigma, grid_seed(config.master_seed, N),
          std::uint64_t(realization)};
}

double SpectrumStats::largest_stderr() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (kappa[i] <= N / 2 - 1) m = std::max(m, energy[i].stderr_mean);
  }
  return m;
}

const GridStats& EnsembleStats::at(int N) const {
  for (const auto& g : grids) {
    if (g.N == N) return g;
  }
  throw Error(ErrorKind::config, "no statistics for N = " + std::to_string(N));
}

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  if (xs.empty()) return r;
  // Accumulated relative to the first sample.
  const double x0 = xs.front();
  double sum = 0.0;
  for (double x : xs) sum += x - x0;
  const double shift = sum / double(xs.size());
  r.mean = x0 + shift;
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - x0 - shift) * (x - x0 - shift);
  r.stderr_mean = std::sqrt(ss / double(xs.size() - 1) / double(xs.size()));
  return r;
}

Observation observe_realization(const ExperimentConfig& config, int N, int realization,
                                RealField* final_field) {
  const GridSpec grid(config.dim, N);
  RealField u = integrate(config.scheme, config.ic, realization_noise(config, N, realization),
                          grid)
                    .final_field;
  Observation obs;
  double sq = 0.0;
  for (double v : u.values()) sq += v * v;
  obs.l2_norm_sq = grid.cell_volume() * sq;
  obs.site_moment = sq / double(u.size());
  if (config.dim == 2) {
    const RadialSpectrum R = radial_energy_density(forward_dft(u));
    obs.energy.reserve(R.bins.size());
    for (const auto& b : R.bins) obs.energy.push_back(b.energy);
    if (config.intervals > 0) obs.intervals = interval_averages(u, config.intervals);
  }
  if (final_field) *final_field = std::move(u);
  return obs;
}

EnsembleStats run_ensemble(const ExperimentConfig& config) {
  config.validate();
  struct Task {
    int grid_index;
    int realization;
  };
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < config.grid_sizes.size(); ++g) {
    for (int r = 0; r < config.realizations; ++r) tasks.push_back({int(g), r});
  }
  std::vector<Observation> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::vector<std::optional<RealField>> first(config.grid_sizes.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task t = tasks[i];
      const int N = config.grid_sizes[std::size_t(t.grid_index)];
      try {
        if (t.realization == 0) {
          RealField f{GridSpec(config.dim, N)};
          results[i] = observe_realization(config, N, 0, &f);
          first[std::size_t(t.grid_index)] = std::move(f);
        } else {
          results[i] = observe_realization(config, N, t.realization);
        }
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  unsigned n_workers = config.workers > 0 ? unsigned(config.workers)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_workers = unsigned(std::min<std::size_t>(n_workers, tasks.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EnsembleStats stats;
  std::size_t base = 0;
  for (std::size_t g = 0; g < config.grid_sizes.size(); ++g) {
    const int N = config.grid_sizes[g];
    const std::size_t R = std::size_t(config.realizations);
    GridStats gs;
    gs.N = N;
    gs.realizations = config.realizations;
    gs.sample_field = std::move(first[g]);
    std::vector<double> xs(R);
    auto collect = [&](auto get) {
      for (std::size_t r = 0; r < R; ++r) xs[r] = get(results[base + r]);
      return mean_stderr(xs);
    };
    gs.l2_norm_sq = collect([](const Observation& o) { return o.l2_norm_sq; });
    gs.site_moment = collect([](const Observation& o) { return o.site_moment; });
    if (config.dim == 2) {
      SpectrumStats sp;
      sp.N = N;
      const int kmax = radial_kappa_max(N);
      std::vector<long long> card(std::size_t(kmax), 0);
      const GridSpec grid(2, N);
      for (std::size_t p = 0; p < grid.size(); ++p) ++card[std::size_t(radial_bin(grid.norm_sq(p)) - 1)];
      for (int k = 1; k <= kmax; ++k) {
        sp.kappa.push_back(k);
        sp.cardinality.push_back(card[std::size_t(k - 1)]);
        sp.energy.push_back(
            collect([k](const Observation& o) { return o.energy[std::size_t(k - 1)]; }));
      }
      gs.spectrum = std::move(sp);
      for (int j = 0; j < config.intervals; ++j) {
        gs.intervals.push_back(
            collect([j](const Observation& o) { return o.intervals[std::size_t(j)]; }));
      }
    }
    stats.grids.push_back(std::move(gs));
    base += R;
  }
  return stats;
}

// ---------------------------------------------------------------------------

LoglogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::config, "fit: length mismatch");
  if (x.size() < 2) throw Error(ErrorKind::config, "fit needs at least two points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw Error(ErrorKind::domain, "log-log fit needs positive values");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double n = double(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  LoglogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points = int(lx.size());
  return f;
}

LoglogFit fit_loglog_slope(const SpectrumStats& spectrum, int kappa_min, int kappa_max) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < spectrum.kappa.size(); ++i) {
    const int k = spectrum.kappa[i];
    if (k < kappa_min || k > kappa_max) continue;
    x.push_back(k);
    y.push_back(spectrum.energy[i].mean);
  }
  if (x.size() < 3) {
    throw Error(ErrorKind::config, "slope fit needs at least 3 bins in [" +
                                       std::to_string(kappa_min) + ", " +
                                       std::to_string(kappa_max) + "]");
  }
  return fit_loglog(x, y);
}

LoglogFit fit_loglog_slope(const EnsembleStats& stats, int N, int kappa_min, int kappa_max) {
  const auto& g = stats.at(N);
  if (!g.spectrum) throw Error(ErrorKind::unsupported_dimension, "no spectrum for d = 1");
  return fit_loglog_slope(*g.spectrum, kappa_min, kappa_max);
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::config, "linear fit needs two or more paired points");
  }
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

std::vector<OverlayRow> overlay_prediction(const std::vector<double>& x,
                                           const std::vector<double>& measured,
                                           const PredictionCurve& curve) {
  if (x.size() != measured.size() || curve.x.size() != curve.value.size()) {
    throw Error(ErrorKind::config, "overlay: length mismatch");
  }
  std::map<double, double> predicted;
  for (std::size_t i = 0; i < curve.x.size(); ++i) predicted[curve.x[i]] = curve.value[i];
  std::vector<OverlayRow> rows;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = predicted.find(x[i]);
    if (it == predicted.end()) continue;
    OverlayRow row{x[i], measured[i], it->second, std::nullopt};
    if (it->second != 0.0) row.ratio = measured[i] / it->second;
    rows.push_back(row);
  }
  if (rows.empty()) {
    throw Error(ErrorKind::axis_mismatch, "overlay: measurement and curve '" + curve.source +
                                              "' share no abscissae");
  }
  return rows;
}

std::vector<OverlayRow> overlay_prediction(const SpectrumStats& spectrum,
                                           const PredictionCurve& curve) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < spectrum.kappa.size(); ++i) {
    x.push_back(spectrum.kappa[i]);
    y.push_back(spectrum.energy[i].mean);
  }
  return overlay_prediction(x, y, curve);
}

}  // namespace tspde
