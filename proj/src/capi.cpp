#include "tspde/tspde.h"

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tspde/ensemble.hpp"
#include "tspde/error.hpp"
#include "tspde/export.hpp"
#include "tspde/field_io.hpp"
#include "tspde/presets.hpp"
#include "tspde/renorm.hpp"

struct tspde_field {
  tspde::RealField field;
};

struct tspde_ensemble {
  tspde::ExperimentConfig config;
  std::optional<tspde::EnsembleStats> stats;
  double wall_seconds = 0.0;
};

namespace {

thread_local std::string last_error;

tspde_status fail(tspde_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
tspde_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return TSPDE_OK;
  } catch (const tspde::Error& e) {
    return fail(static_cast<tspde_status>(tspde::exit_code(e.kind())),
                std::string(tspde::to_string(e.kind())) + ": " + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(TSPDE_ERR_IO, std::string("io: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(TSPDE_ERR_NUMERICAL, "numerical: out of memory");
  } catch (const std::exception& e) {
    return fail(TSPDE_ERR_CONFIG, std::string("config: ") + e.what());
  }
}

void require_arg(const void* p, const char* what) {
  if (!p) throw tspde::Error(tspde::ErrorKind::config, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tspde::Equation to_equation(tspde_equation e) {
  switch (e) {
    case TSPDE_HEAT: return tspde::Equation::heat;
    case TSPDE_DECOUPLED_AC: return tspde::Equation::decoupled_ac;
    case TSPDE_ALLEN_CAHN: return tspde::Equation::allen_cahn;
  }
  throw tspde::Error(tspde::ErrorKind::config, "unknown equation code");
}

std::vector<int> doubling_from(int lo, int hi) {
  std::vector<int> out;
  for (int n = lo; n < hi; n *= 2) out.push_back(n);
  out.push_back(hi);
  return out;
}

tspde::PredictionCurve make_curve(const std::string& kind, double sigma, int n) {
  if (n < 2) throw tspde::Error(tspde::ErrorKind::domain, "N must be >= 2");
  const int lo = std::min(16, n);
  if (kind == "cn") return tspde::cn_curve(sigma, doubling_from(lo, n));
  if (kind == "mode-energy") return tspde::mode_energy_curve(sigma, n, n);
  if (kind == "norm") return tspde::norm_curve(sigma, doubling_from(lo, n));
  if (kind == "heat-series") return tspde::heat_series_curve(sigma, doubling_from(lo, n));
  throw tspde::Error(tspde::ErrorKind::config, "unknown curve kind '" + kind + "'");
}

// Fit window over the interior bins, widened when [8, N/4] is too short.
std::pair<int, int> tail_window(int N) {
  if (N / 4 - 8 + 1 >= 3) return {8, N / 4};
  return {8, N / 2 - 1};
}

}  // namespace

extern "C" {

const char* tspde_version(void) { return tspde::software_version(); }

const char* tspde_last_error(void) { return last_error.c_str(); }

void tspde_string_free(char* s) { std::free(s); }

tspde_status tspde_parse_equation(const char* name, tspde_equation* out) {
  return guarded([&] {
    require_arg(name, "name");
    require_arg(out, "out");
    switch (tspde::parse_equation(name)) {
      case tspde::Equation::heat: *out = TSPDE_HEAT; break;
      case tspde::Equation::decoupled_ac: *out = TSPDE_DECOUPLED_AC; break;
      case tspde::Equation::allen_cahn: *out = TSPDE_ALLEN_CAHN; break;
    }
  });
}

void tspde_sim_config_init(tspde_sim_config* cfg) {
  if (!cfg) return;
  *cfg = tspde_sim_config{TSPDE_HEAT, 2, 32, 1e-3, 1.0, 0.0, 0.0, 0.0, nullptr, 0, -1};
}

tspde_status tspde_simulate(const tspde_sim_config* cfg, const char* out_dir,
                            tspde_field** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require_arg(cfg, "config");
    if (!(cfg->dt > 0.0) || !(cfg->t_final > 0.0)) {
      throw tspde::Error(tspde::ErrorKind::config, "dt and t_final must be > 0");
    }
    const double ratio = cfg->t_final / cfg->dt;
    const auto steps = static_cast<std::int64_t>(std::llround(ratio));
    if (steps < 1 || std::abs(ratio - double(steps)) > 1e-9 * ratio) {
      throw tspde::Error(tspde::ErrorKind::config, "t_final must be a whole multiple of dt");
    }
    tspde::ExperimentConfig c;
    c.preset = "simulate";
    c.scheme.equation = to_equation(cfg->equation);
    c.scheme.alpha = cfg->alpha;
    c.scheme.g = cfg->g;
    c.scheme.sigma = cfg->sigma;
    c.scheme.t_final = cfg->t_final;
    c.scheme.steps = steps;
    c.scheme.dealias = cfg->dealias < 0 ? tspde::SchemeConfig::default_dealias(c.scheme.equation)
                                        : cfg->dealias != 0;
    c.ic = tspde::initial_condition_from_label(cfg->ic ? cfg->ic : "zero");
    c.dim = cfg->dim;
    c.grid_sizes = {cfg->n};
    c.realizations = 1;
    c.master_seed = cfg->seed;
    c.workers = 1;
    c.validate();
    const tspde::GridSpec grid(cfg->dim, cfg->n);
    const auto t0 = std::chrono::steady_clock::now();
    tspde::RealField u =
        tspde::integrate(c.scheme, c.ic, tspde::realization_noise(c, cfg->n, 0), grid)
            .final_field;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out_dir) {
      c.output_dir = out_dir;
      tspde::export_simulation(c, u, wall);
    }
    if (out) *out = new tspde_field{std::move(u)};
  });
}

tspde_status tspde_field_load(const char* path, tspde_field** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    *out = new tspde_field{tspde::read_snapshot(std::filesystem::path(path))};
  });
}

tspde_status tspde_field_save(const tspde_field* f, const char* path) {
  return guarded([&] {
    require_arg(f, "field");
    require_arg(path, "path");
    tspde::write_snapshot(f->field, std::filesystem::path(path));
  });
}

void tspde_field_free(tspde_field* f) { delete f; }

int tspde_field_dim(const tspde_field* f) { return f ? f->field.grid().dim() : 0; }

int tspde_field_n(const tspde_field* f) { return f ? f->field.grid().n() : 0; }

const double* tspde_field_values(const tspde_field* f, size_t* count) {
  if (!f) {
    if (count) *count = 0;
    return nullptr;
  }
  if (count) *count = f->field.size();
  return f->field.values().data();
}

tspde_status tspde_field_sobolev_norm(const tspde_field* f, double s, double* out) {
  return guarded([&] {
    require_arg(f, "field");
    require_arg(out, "out");
    *out = tspde::discrete_sobolev_norm(f->field, {s});
  });
}

tspde_status tspde_ensemble_create(const char* preset, int full, tspde_ensemble** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require_arg(preset, "preset");
    require_arg(out, "out");
    *out = new tspde_ensemble{tspde::preset(preset, full != 0), std::nullopt, 0.0};
  });
}

tspde_status tspde_ensemble_set_realizations(tspde_ensemble* e, int n) {
  return guarded([&] {
    require_arg(e, "ensemble");
    if (n < 1) throw tspde::Error(tspde::ErrorKind::config, "realizations must be >= 1");
    e->config.realizations = n;
  });
}

tspde_status tspde_ensemble_set_workers(tspde_ensemble* e, int n) {
  return guarded([&] {
    require_arg(e, "ensemble");
    if (n < 0) throw tspde::Error(tspde::ErrorKind::config, "workers must be >= 0");
    e->config.workers = n;
  });
}

tspde_status tspde_ensemble_set_seed(tspde_ensemble* e, uint64_t seed) {
  return guarded([&] {
    require_arg(e, "ensemble");
    e->config.master_seed = seed;
  });
}

tspde_status tspde_ensemble_set_output_dir(tspde_ensemble* e, const char* dir) {
  return guarded([&] {
    require_arg(e, "ensemble");
    e->config.output_dir = dir ? dir : "";
  });
}

tspde_status tspde_ensemble_run(tspde_ensemble* e) {
  return guarded([&] {
    require_arg(e, "ensemble");
    const auto t0 = std::chrono::steady_clock::now();
    e->stats = tspde::run_ensemble(e->config);
    e->wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!e->config.output_dir.empty()) {
      tspde::export_ensemble(e->config, *e->stats, e->wall_seconds);
    }
  });
}

tspde_status tspde_ensemble_summary(const tspde_ensemble* e, char** text) {
  if (text) *text = nullptr;
  return guarded([&] {
    require_arg(e, "ensemble");
    require_arg(text, "text");
    if (!e->stats) throw tspde::Error(tspde::ErrorKind::config, "ensemble has not been run");
    std::ostringstream os;
    os << std::setprecision(6);
    os << "preset " << e->config.preset << ": " << e->config.realizations
       << " realizations per N, " << e->wall_seconds << " s\n";
    for (const auto& g : e->stats->grids) {
      os << "N=" << g.N << "  |u|_0^2=" << g.l2_norm_sq.mean << " +- "
         << g.l2_norm_sq.stderr_mean << "  E u^2=" << g.site_moment.mean << " +- "
         << g.site_moment.stderr_mean;
      if (g.spectrum) {
        os << "  max stderr=" << g.spectrum->largest_stderr();
        const auto [lo, hi] = tail_window(g.N);
        try {
          const auto fit = tspde::fit_loglog_slope(*g.spectrum, lo, hi);
          os << "  slope[" << lo << "," << hi << "]=" << fit.slope;
        } catch (const tspde::Error&) {
          os << "  slope n/a";
        }
      }
      for (std::size_t i = 0; i < g.intervals.size(); ++i) {
        os << "  I" << i << "=" << g.intervals[i].mean << " +- " << g.intervals[i].stderr_mean;
      }
      os << '\n';
    }
    *text = dup_string(os.str());
  });
}

void tspde_ensemble_free(tspde_ensemble* e) { delete e; }

tspde_status tspde_solve_cn(double sigma, int n, tspde_renorm_result* out) {
  return guarded([&] {
    require_arg(out, "out");
    const auto r = tspde::solve_CN(sigma, n);
    const auto a = tspde::asymptotic_CN(sigma, n);
    *out = tspde_renorm_result{r.C_N, r.N, r.sigma, r.residual, r.iterations, a.refined,
                               a.leading};
  });
}

tspde_status tspde_write_curve(const char* kind, double sigma, int n, const char* path) {
  return guarded([&] {
    require_arg(kind, "kind");
    require_arg(path, "path");
    tspde::write_curve_csv(make_curve(kind, sigma, n), std::filesystem::path(path));
  });
}

tspde_status tspde_renorm_export(double sigma, int n, const char* kind, const char* out_dir) {
  return guarded([&] {
    require_arg(out_dir, "out_dir");
    const auto r = tspde::solve_CN(sigma, n);
    const auto a = tspde::asymptotic_CN(sigma, n);
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw tspde::Error(tspde::ErrorKind::io, "cannot create " + dir.string());
    if (kind) {
      tspde::write_curve_csv(make_curve(kind, sigma, n),
                             dir / (std::string("curve_") + kind + ".csv"));
    }
    nlohmann::ordered_json j{{"sigma", sigma},
                             {"N", n},
                             {"C_N", r.C_N},
                             {"residual", r.residual},
                             {"iterations", r.iterations},
                             {"asymptotic_refined", a.refined},
                             {"asymptotic_leading", a.leading},
                             {"version", tspde::software_version()}};
    const auto path = dir / "renorm.json";
    std::ofstream f(path);
    if (!f) throw tspde::Error(tspde::ErrorKind::io, "cannot write " + path.string());
    f << std::setprecision(17) << j.dump(2) << '\n';
    if (!f) throw tspde::Error(tspde::ErrorKind::io, "write failed: " + path.string());
  });
}

tspde_status tspde_analyze(const char* spectra_csv, int kappa_min, int kappa_max,
                           const char* overlay_csv, char** report) {
  if (report) *report = nullptr;
  return guarded([&] {
    require_arg(spectra_csv, "spectra_csv");
    require_arg(report, "report");
    const auto spectra = tspde::read_spectra_csv(std::filesystem::path(spectra_csv));
    std::optional<tspde::PredictionCurve> curve;
    if (overlay_csv) curve = tspde::read_curve_csv(std::filesystem::path(overlay_csv));
    std::ostringstream os;
    os << std::setprecision(6);
    int fitted = 0;
    for (const auto& s : spectra) {
      os << "N=" << s.N << "  bins=" << s.kappa.size()
         << "  largest stderr=" << s.largest_stderr() << '\n';
      if (kappa_max > 0) {
        try {
          const auto fit = tspde::fit_loglog_slope(s, kappa_min, kappa_max);
          os << "  fit kappa in [" << kappa_min << "," << kappa_max << "]: slope=" << fit.slope
             << " intercept=" << fit.intercept << " r2=" << fit.r_squared
             << " points=" << fit.points << '\n';
          ++fitted;
        } catch (const tspde::Error& e) {
          os << "  fit skipped: " << e.what() << '\n';
        }
      }
      if (curve) {
        os << "  overlay against " << curve->source << '\n';
        std::ostringstream rows;
        tspde::write_overlay_csv(tspde::overlay_prediction(s, *curve), rows);
        std::istringstream lines(rows.str());
        for (std::string line; std::getline(lines, line);) os << "    " << line << '\n';
      }
    }
    if (kappa_max > 0 && fitted == 0 && !spectra.empty()) {
      throw tspde::Error(tspde::ErrorKind::config,
                         "no spectrum has 3 or more bins in the fit range");
    }
    *report = dup_string(os.str());
  });
}

}  // extern "C"
