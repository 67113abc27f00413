#include "tspde/export.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tspde/error.hpp"
#include "tspde/field_io.hpp"
#include "tspde/presets.hpp"

#ifndef TSPDE_VERSION
#define TSPDE_VERSION "0.0.0"
#endif

namespace tspde {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* software_version() noexcept { return TSPDE_VERSION; }

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double to_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorKind::io, std::string("bad number in ") + what + ": '" + s + "'");
  }
  return v;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_json(const ExperimentConfig& c) {
  const SchemeConfig& s = c.scheme;
  return json{{"preset", c.preset},
              {"equation", to_string(s.equation)},
              {"dim", c.dim},
              {"alpha", s.alpha},
              {"g", s.g},
              {"sigma", s.sigma},
              {"t_final", s.t_final},
              {"steps", s.steps},
              {"dt", s.dt()},
              {"dealias", s.dealias},
              {"initial_condition", c.ic.label()},
              {"grid_sizes", c.grid_sizes},
              {"realizations", c.realizations},
              {"intervals", c.intervals},
              {"workers", c.workers}};
}

json seeds_json(const ExperimentConfig& c) {
  json grids = json::array();
  for (int n : c.grid_sizes) {
    json keys = json::array();
    for (int r = 0; r < c.realizations; ++r) keys.push_back(realization_noise(c, n, r).stream());
    grids.push_back({{"N", n}, {"grid_seed", grid_seed(c.master_seed, n)}, {"stream_keys", keys}});
  }
  return grids;
}

fs::path write_manifest(const ExperimentConfig& c, const char* kind,
                        const std::vector<fs::path>& files, double wall_seconds) {
  json artifacts = json::array();
  for (const auto& f : files) {
    artifacts.push_back({{"path", f.filename().string()},
                         {"bytes", fs::file_size(f)},
                         {"fnv1a64", hex64(fnv1a64_file(f))}});
  }
  json m{{"software", {{"name", "torus-spde"}, {"version", software_version()}}},
         {"kind", kind},
         {"config", config_json(c)},
         {"master_seed", c.master_seed},
         {"seed_derivation", "stream_key(stream_key(master, 0x4e00000000000000 + N), r)"},
         {"seeds", seeds_json(c)},
         {"artifacts", artifacts},
         {"wall_clock_seconds", wall_seconds},
         {"created_utc", utc_now()}};
  const fs::path path = c.output_dir / "manifest.json";
  auto out = open_out(path);
  out << m.dump(2) << '\n';
  finish(out, path);
  return path;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

// ---------------------------------------------------------------------------

void write_spectra_csv(const EnsembleStats& stats, std::ostream& out) {
  out << std::setprecision(17) << "N,kappa,mean_energy,stderr,cardinality\n";
  for (const auto& g : stats.grids) {
    if (!g.spectrum) continue;
    const auto& s = *g.spectrum;
    for (std::size_t i = 0; i < s.kappa.size(); ++i) {
      out << s.N << ',' << s.kappa[i] << ',' << s.energy[i].mean << ','
          << s.energy[i].stderr_mean << ',' << s.cardinality[i] << '\n';
    }
  }
}

std::vector<SpectrumStats> read_spectra_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "N,kappa,mean_energy,stderr,cardinality") {
    throw Error(ErrorKind::io, "spectra CSV: unexpected header");
  }
  std::vector<SpectrumStats> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 5) throw Error(ErrorKind::io, "spectra CSV: bad row '" + line + "'");
    const int N = int(to_double(cells[0], "spectra CSV"));
    if (out.empty() || out.back().N != N) {
      out.emplace_back();
      out.back().N = N;
    }
    auto& s = out.back();
    s.kappa.push_back(int(to_double(cells[1], "spectra CSV")));
    s.energy.push_back({to_double(cells[2], "spectra CSV"), to_double(cells[3], "spectra CSV")});
    s.cardinality.push_back(static_cast<long long>(to_double(cells[4], "spectra CSV")));
  }
  return out;
}

std::vector<SpectrumStats> read_spectra_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return read_spectra_csv(in);
}

void write_intervals_csv(const EnsembleStats& stats, std::ostream& out) {
  out << std::setprecision(17) << "N,interval_index,mean,stderr\n";
  for (const auto& g : stats.grids) {
    for (std::size_t i = 0; i < g.intervals.size(); ++i) {
      out << g.N << ',' << i << ',' << g.intervals[i].mean << ','
          << g.intervals[i].stderr_mean << '\n';
    }
  }
}

void write_moments_csv(const EnsembleStats& stats, std::ostream& out) {
  out << std::setprecision(17) << "N,observable,mean,stderr\n";
  for (const auto& g : stats.grids) {
    out << g.N << ",l2_norm_sq," << g.l2_norm_sq.mean << ',' << g.l2_norm_sq.stderr_mean
        << '\n';
    out << g.N << ",site_second_moment," << g.site_moment.mean << ','
        << g.site_moment.stderr_mean << '\n';
  }
}

void write_curve_csv(const PredictionCurve& curve, std::ostream& out) {
  out << std::setprecision(17) << "x,value,source_equation\n";
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    out << curve.x[i] << ',' << curve.value[i] << ',' << curve.source << '\n';
  }
}

void write_curve_csv(const PredictionCurve& curve, const fs::path& path) {
  auto out = open_out(path);
  write_curve_csv(curve, out);
  finish(out, path);
}

PredictionCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,value,source_equation") {
    throw Error(ErrorKind::io, "curve CSV: unexpected header");
  }
  PredictionCurve c;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 3) throw Error(ErrorKind::io, "curve CSV: bad row '" + line + "'");
    c.x.push_back(to_double(cells[0], "curve CSV"));
    c.value.push_back(to_double(cells[1], "curve CSV"));
    c.source = cells[2];
  }
  return c;
}

PredictionCurve read_curve_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return read_curve_csv(in);
}

void write_overlay_csv(const std::vector<OverlayRow>& rows, std::ostream& out) {
  out << std::setprecision(17) << "x,measured,predicted,ratio\n";
  for (const auto& r : rows) {
    out << r.x << ',' << r.measured << ',' << r.predicted << ',';
    if (r.ratio) out << *r.ratio;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

ExportReport export_ensemble(const ExperimentConfig& config, const EnsembleStats& stats,
                             double wall_seconds) {
  make_dir(config.output_dir);
  ExportReport rep;
  auto emit = [&](const char* name, auto writer) {
    const fs::path p = config.output_dir / name;
    auto out = open_out(p);
    writer(out);
    finish(out, p);
    rep.files.push_back(p);
  };
  if (config.dim == 2) emit("spectra.csv", [&](std::ostream& o) { write_spectra_csv(stats, o); });
  if (config.intervals > 0) {
    emit("intervals.csv", [&](std::ostream& o) { write_intervals_csv(stats, o); });
  }
  emit("moments.csv", [&](std::ostream& o) { write_moments_csv(stats, o); });
  for (const auto& g : stats.grids) {
    if (!g.sample_field) continue;
    const fs::path p = config.output_dir / ("field_N" + std::to_string(g.N) + "_r0.tspd");
    write_snapshot(*g.sample_field, p);
    rep.files.push_back(p);
  }
  rep.manifest = write_manifest(config, "ensemble", rep.files, wall_seconds);
  return rep;
}

ExportReport export_simulation(const ExperimentConfig& config, const RealField& field,
                               double wall_seconds) {
  make_dir(config.output_dir);
  ExportReport rep;
  const fs::path f = config.output_dir / "field.tspd";
  write_snapshot(field, f);
  rep.files.push_back(f);
  if (field.grid().dim() == 2) {
    const fs::path r = config.output_dir / "radial.csv";
    write_radial_csv(radial_energy_density(forward_dft(field)), r);
    rep.files.push_back(r);
  }
  rep.manifest = write_manifest(config, "simulation", rep.files, wall_seconds);
  return rep;
}

ExperimentConfig read_manifest_config(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorKind::io, "cannot open " + manifest.string());
  json m;
  try {
    m = json::parse(in);
    const json& c = m.at("config");
    ExperimentConfig e;
    e.preset = c.at("preset").get<std::string>();
    e.scheme.equation = parse_equation(c.at("equation").get<std::string>());
    e.dim = c.at("dim").get<int>();
    e.scheme.alpha = c.at("alpha").get<double>();
    e.scheme.g = c.at("g").get<double>();
    e.scheme.sigma = c.at("sigma").get<double>();
    e.scheme.t_final = c.at("t_final").get<double>();
    e.scheme.steps = c.at("steps").get<std::int64_t>();
    e.scheme.dealias = c.at("dealias").get<bool>();
    e.ic = initial_condition_from_label(c.at("initial_condition").get<std::string>());
    e.grid_sizes = c.at("grid_sizes").get<std::vector<int>>();
    e.realizations = c.at("realizations").get<int>();
    e.intervals = c.at("intervals").get<int>();
    e.workers = c.at("workers").get<int>();
    e.master_seed = m.at("master_seed").get<std::uint64_t>();
    e.output_dir = manifest.parent_path();
    return e;
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::io, "manifest " + manifest.string() + ": " + ex.what());
  }
}

RealField replay_realization(const fs::path& manifest, int N, int realization) {
  const ExperimentConfig c = read_manifest_config(manifest);
  if (std::find(c.grid_sizes.begin(), c.grid_sizes.end(), N) == c.grid_sizes.end()) {
    throw Error(ErrorKind::config, "manifest has no grid N = " + std::to_string(N));
  }
  if (realization < 0 || realization >= c.realizations) {
    throw Error(ErrorKind::config, "realization index out of range");
  }
  return integrate(c.scheme, c.ic, realization_noise(c, N, realization),
                   GridSpec(c.dim, N))
      .final_field;
}

}  // namespace tspde
