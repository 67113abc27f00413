#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "tspde/ensemble.hpp"
#include "tspde/error.hpp"
#include "tspde/export.hpp"
#include "tspde/field_io.hpp"
#include "tspde/presets.hpp"
#include "tspde/renorm.hpp"

using namespace tspde;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

ExperimentConfig small_heat(int realizations = 6) {
  ExperimentConfig c;
  c.preset = "small";
  c.scheme.equation = Equation::heat;
  c.scheme.alpha = 0.5;
  c.scheme.g = 1.0;
  c.scheme.sigma = 0.3;
  c.scheme.t_final = 0.2;
  c.scheme.steps = 40;
  c.scheme.dealias = false;
  c.grid_sizes = {16, 32};
  c.realizations = realizations;
  c.master_seed = 2718;
  c.intervals = 4;
  c.workers = 1;
  return c;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tspde_test_" + name);
  fs::remove_all(p);
  return p;
}

void require_identical(const EnsembleStats& a, const EnsembleStats& b) {
  REQUIRE(a.grids.size() == b.grids.size());
  for (std::size_t i = 0; i < a.grids.size(); ++i) {
    const auto& x = a.grids[i];
    const auto& y = b.grids[i];
    CHECK(x.l2_norm_sq.mean == y.l2_norm_sq.mean);
    CHECK(x.l2_norm_sq.stderr_mean == y.l2_norm_sq.stderr_mean);
    CHECK(x.site_moment.mean == y.site_moment.mean);
    REQUIRE(x.spectrum.has_value() == y.spectrum.has_value());
    if (x.spectrum) {
      for (std::size_t k = 0; k < x.spectrum->energy.size(); ++k) {
        CHECK(x.spectrum->energy[k].mean == y.spectrum->energy[k].mean);
        CHECK(x.spectrum->energy[k].stderr_mean == y.spectrum->energy[k].stderr_mean);
      }
    }
    for (std::size_t k = 0; k < x.intervals.size(); ++k) {
      CHECK(x.intervals[k].mean == y.intervals[k].mean);
    }
  }
}

}  // namespace

TEST_CASE("mean and standard error") {
  const auto m = mean_stderr({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.stderr_mean == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(mean_stderr({7.0}).stderr_mean == 0.0);
}

TEST_CASE("config validation") {
  auto c = small_heat();
  CHECK_NOTHROW(c.validate());
  c.realizations = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_heat();
  c.grid_sizes = {};
  CHECK_THROWS_AS(c.validate(), Error);
  c.grid_sizes = {15};
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("seeding") {
  const auto c = small_heat();
  CHECK(grid_seed(1, 16) != grid_seed(1, 32));
  CHECK(grid_seed(1, 16) != grid_seed(2, 16));
  const auto n = realization_noise(c, 16, 3);
  CHECK(n.master_seed == grid_seed(c.master_seed, 16));
  CHECK(n.realization_index == 3);
  CHECK(n.sigma == c.scheme.sigma);
}

TEST_CASE("deterministic ensemble has no spread") {
  auto c = small_heat(1);
  c.scheme.sigma = 0.0;
  c.ic = InitialCondition::sin_2x();
  const auto s = run_ensemble(c);
  for (const auto& g : s.grids) {
    CHECK(g.l2_norm_sq.stderr_mean == 0.0);
    for (const auto& e : g.spectrum->energy) CHECK(e.stderr_mean == 0.0);
    for (const auto& e : g.intervals) CHECK(e.stderr_mean == 0.0);
  }
  auto c3 = c;
  c3.realizations = 3;
  for (const auto& g : run_ensemble(c3).grids) {
    CHECK(g.l2_norm_sq.stderr_mean == 0.0);
    for (const auto& e : g.spectrum->energy) CHECK(e.stderr_mean == 0.0);
  }
}

TEST_CASE("worker count invariance") {
  auto c = small_heat(7);
  const auto one = run_ensemble(c);
  c.workers = 2;
  const auto two = run_ensemble(c);
  c.workers = 4;
  const auto four = run_ensemble(c);
  c.workers = 0;
  const auto all = run_ensemble(c);
  require_identical(one, two);
  require_identical(one, four);
  require_identical(one, all);
}

TEST_CASE("ensemble statistics match the per-realization observations") {
  const auto c = small_heat(4);
  const auto s = run_ensemble(c);
  std::vector<double> l2;
  RealField first(GridSpec(2, 32));
  for (int r = 0; r < 4; ++r) {
    l2.push_back(observe_realization(c, 32, r, r == 0 ? &first : nullptr).l2_norm_sq);
  }
  const auto& g = s.at(32);
  CHECK(g.realizations == 4);
  CHECK(g.l2_norm_sq.mean == mean_stderr(l2).mean);
  REQUIRE(g.sample_field.has_value());
  for (std::size_t p = 0; p < first.size(); ++p) CHECK((*g.sample_field)[p] == first[p]);
  CHECK(g.spectrum->kappa.size() == std::size_t(radial_kappa_max(32)));
  for (const auto& e : g.spectrum->energy) CHECK(e.mean >= 0.0);
  CHECK(g.intervals.size() == 4);
  CHECK_THROWS_AS(s.at(64), Error);
}

TEST_CASE("failing realization aborts the ensemble") {
  auto c = small_heat(3);
  c.scheme.equation = Equation::decoupled_ac;
  c.scheme.alpha = 0.0;
  c.scheme.sigma = 0.0;
  c.scheme.g = 1.0;
  c.scheme.t_final = 1.0;
  c.scheme.steps = 10;
  c.ic = InitialCondition::sampled([](double, double) { return 60.0; }, "big");
  try {
    (void)run_ensemble(c);
    FAIL("expected numerical error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::numerical);
  }
}

TEST_CASE("one dimensional ensembles") {
  auto c = small_heat(3);
  c.dim = 1;
  c.grid_sizes = {64};
  c.intervals = 0;
  const auto s = run_ensemble(c);
  CHECK_FALSE(s.grids[0].spectrum.has_value());
  CHECK(s.grids[0].l2_norm_sq.mean > 0.0);
}

TEST_CASE("log-log fits") {
  SpectrumStats sp;
  sp.N = 64;
  for (int k = 1; k <= 31; ++k) {
    sp.kappa.push_back(k);
    sp.energy.push_back({1.0 / (k * k), 0.0});
    sp.cardinality.push_back(1);
  }
  const auto f = fit_loglog_slope(sp, 4, 16);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.points == 13);
  for (auto& e : sp.energy) e.mean = 0.25;
  CHECK(fit_loglog_slope(sp, 4, 16).slope == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(fit_loglog_slope(sp, 4, 5), Error);
  sp.energy[9].mean = 0.0;
  try {
    (void)fit_loglog_slope(sp, 4, 16);
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  CHECK(linear_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
}

TEST_CASE("prediction overlays") {
  PredictionCurve curve{"test", {1, 2, 3, 4}, {2.0, 0.0, 6.0, 8.0}};
  const auto same = overlay_prediction({1, 3, 4}, {2.0, 6.0, 8.0}, curve);
  REQUIRE(same.size() == 3);
  for (const auto& r : same) {
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio == 1.0);
  }
  const auto zero = overlay_prediction({2}, {5.0}, curve);
  REQUIRE(zero.size() == 1);
  CHECK_FALSE(zero[0].ratio.has_value());
  try {
    (void)overlay_prediction({10, 11}, {1.0, 1.0}, curve);
    FAIL("expected axis mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::axis_mismatch);
  }
  std::ostringstream os;
  write_overlay_csv(zero, os);
  CHECK(os.str().find("x,measured,predicted,ratio\n") == 0);
  CHECK(os.str().back() == '\n');
  CHECK(os.str().find(",\n") != std::string::npos);
}

TEST_CASE("presets") {
  const auto f1 = preset("fig1");
  CHECK(f1.scheme.sigma == doctest::Approx(pi / 50));
  CHECK(f1.scheme.alpha == 0.5);
  CHECK(f1.scheme.g == 1.0);
  CHECK(f1.scheme.steps == 2000);
  CHECK(f1.realizations == 40);
  CHECK(f1.grid_sizes == std::vector<int>{32, 64, 128, 256});
  CHECK(preset("fig1", true).grid_sizes.back() == 2048);
  const auto f2 = preset("fig2");
  CHECK(f2.scheme.equation == Equation::decoupled_ac);
  CHECK(f2.scheme.g == 0.1);
  CHECK(f2.scheme.sigma == doctest::Approx(pi / 5));
  CHECK(f2.scheme.t_final == 2.0);
  CHECK(f2.scheme.steps == 4000);
  const auto f3 = preset("fig3");
  CHECK(f3.scheme.equation == Equation::allen_cahn);
  CHECK(f3.scheme.alpha == doctest::Approx(6.4e-3));
  CHECK(f3.scheme.sigma == doctest::Approx(2 * pi / 5));
  CHECK(f3.scheme.dealias);
  const auto f4 = preset("fig4");
  CHECK(f4.ic.label() == "sin2x");
  CHECK(f4.scheme.sigma == doctest::Approx(pi / 8));
  CHECK(f4.scheme.steps == 1000);
  const auto f4f = preset("fig4f");
  CHECK(f4f.realizations == 120);
  CHECK(f4f.grid_sizes == std::vector<int>{8, 32, 128});
  CHECK(f4f.intervals == 4);
  const auto h = preset("heat1d_validation");
  CHECK(h.dim == 1);
  CHECK(h.grid_sizes == std::vector<int>{64});
  CHECK(h.scheme.sigma == 0.5);
  CHECK(preset_names().size() == 6);
  CHECK_THROWS_AS(preset("fig5"), Error);
  CHECK(initial_condition_from_label("zero").label() == "zero");
  CHECK_THROWS_AS(initial_condition_from_label("cosine"), Error);
}

TEST_CASE("csv round trips") {
  const auto c = small_heat(3);
  const auto s = run_ensemble(c);
  std::stringstream ss;
  write_spectra_csv(s, ss);
  CHECK(ss.str().rfind("N,kappa,mean_energy,stderr,cardinality\n", 0) == 0);
  const auto back = read_spectra_csv(ss);
  REQUIRE(back.size() == 2);
  for (std::size_t g = 0; g < 2; ++g) {
    const auto& a = *s.grids[g].spectrum;
    CHECK(back[g].N == a.N);
    REQUIRE(back[g].energy.size() == a.energy.size());
    for (std::size_t k = 0; k < a.energy.size(); ++k) {
      CHECK(back[g].energy[k].mean == a.energy[k].mean);
      CHECK(back[g].energy[k].stderr_mean == a.energy[k].stderr_mean);
      CHECK(back[g].cardinality[k] == a.cardinality[k]);
    }
  }
  std::stringstream empty;
  write_spectra_csv(EnsembleStats{}, empty);
  CHECK(empty.str() == "N,kappa,mean_energy,stderr,cardinality\n");
  CHECK(read_spectra_csv(empty).empty());
  std::stringstream ei;
  write_intervals_csv(EnsembleStats{}, ei);
  CHECK(ei.str() == "N,interval_index,mean,stderr\n");

  const auto curve = cn_curve(1.0, {16, 32});
  std::stringstream cs;
  write_curve_csv(curve, cs);
  CHECK(cs.str().rfind("x,value,source_equation\n", 0) == 0);
  const auto cb = read_curve_csv(cs);
  CHECK(cb.source == curve.source);
  CHECK(cb.value == curve.value);
  CHECK(cb.x == curve.x);

  std::stringstream bad("N,kappa,mean_energy,stderr,cardinality\n32,1,abc,0,5\n");
  try {
    (void)read_spectra_csv(bad);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  try {
    (void)read_spectra_csv(fs::path("/nonexistent/spectra.csv"));
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}

TEST_CASE("export and replay") {
  auto c = small_heat(3);
  c.scheme.equation = Equation::allen_cahn;
  c.scheme.alpha = 6.4e-3;
  c.scheme.g = 0.5;
  c.scheme.dealias = true;
  c.ic = InitialCondition::sin_2x();
  c.output_dir = scratch_dir("export");
  const auto s = run_ensemble(c);
  const auto rep = export_ensemble(c, s, 1.5);
  REQUIRE(fs::exists(rep.manifest));
  CHECK(rep.manifest.filename() == "manifest.json");

  // The manifest is the last artifact written.
  for (const auto& f : rep.files) {
    CHECK(fs::exists(f));
    CHECK(fs::last_write_time(f) <= fs::last_write_time(rep.manifest));
  }

  std::ifstream in(rep.manifest);
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("master_seed").get<std::uint64_t>() == c.master_seed);
  CHECK(j.at("software").at("version").get<std::string>() == software_version());
  CHECK(j.at("wall_clock_seconds").get<double>() == 1.5);
  for (const auto& a : j.at("artifacts")) {
    const fs::path p = c.output_dir / a.at("path").get<std::string>();
    CHECK(fs::file_size(p) == a.at("bytes").get<std::uintmax_t>());
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)fnv1a64_file(p));
    CHECK(a.at("fnv1a64").get<std::string>() == hex);
  }

  const auto echo = read_manifest_config(rep.manifest);
  CHECK(echo.scheme.equation == c.scheme.equation);
  CHECK(echo.scheme.sigma == c.scheme.sigma);
  CHECK(echo.grid_sizes == c.grid_sizes);
  CHECK(echo.ic.label() == "sin2x");

  for (int N : c.grid_sizes) {
    for (int r = 0; r < c.realizations; ++r) {
      RealField direct(GridSpec(2, N));
      (void)observe_realization(c, N, r, &direct);
      const RealField replay = replay_realization(rep.manifest, N, r);
      for (std::size_t p = 0; p < direct.size(); ++p) REQUIRE(replay[p] == direct[p]);
    }
    const auto snap = read_snapshot(c.output_dir / ("field_N" + std::to_string(N) + "_r0.tspd"));
    for (std::size_t p = 0; p < snap.size(); ++p) REQUIRE(snap[p] == (*s.at(N).sample_field)[p]);
  }
  CHECK_THROWS_AS(replay_realization(rep.manifest, 64, 0), Error);
  fs::remove_all(c.output_dir);
}

TEST_CASE("export to an unwritable place") {
  auto c = small_heat(1);
  c.grid_sizes = {16};
  const fs::path blocker = scratch_dir("blocker");
  std::ofstream(blocker) << "file";
  c.output_dir = blocker / "sub";
  const auto s = run_ensemble(c);
  try {
    (void)export_ensemble(c, s, 0.0);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  fs::remove(blocker);
}

TEST_CASE("fnv1a") {
  const std::string abc = "a";
  const auto* p = reinterpret_cast<const unsigned char*>(abc.data());
  CHECK(fnv1a64({p, 1}) == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64({}) == 0xcbf29ce484222325ULL);
}
