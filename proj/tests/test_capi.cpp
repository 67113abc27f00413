#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "tspde/tspde.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tspde_capi_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::strlen(tspde_version()) > 0);
  tspde_equation eq;
  CHECK(tspde_parse_equation("ac", &eq) == TSPDE_OK);
  CHECK(eq == TSPDE_ALLEN_CAHN);
  CHECK(tspde_parse_equation("dac", &eq) == TSPDE_OK);
  CHECK(eq == TSPDE_DECOUPLED_AC);
  CHECK(tspde_parse_equation("nope", &eq) == TSPDE_ERR_CONFIG);
  CHECK(std::strlen(tspde_last_error()) > 0);
  CHECK(tspde_parse_equation(nullptr, &eq) == TSPDE_ERR_CONFIG);
}

TEST_CASE("simulate") {
  tspde_sim_config cfg;
  tspde_sim_config_init(&cfg);
  cfg.equation = TSPDE_ALLEN_CAHN;
  cfg.n = 16;
  cfg.dt = 0.01;
  cfg.t_final = 0.1;
  cfg.sigma = 0.5;
  cfg.alpha = 6.4e-3;
  cfg.g = 0.5;
  cfg.ic = "sin2x";
  cfg.seed = 9;
  const fs::path dir = scratch("sim");
  tspde_field* a = nullptr;
  REQUIRE(tspde_simulate(&cfg, dir.c_str(), &a) == TSPDE_OK);
  REQUIRE(a != nullptr);
  CHECK(tspde_field_dim(a) == 2);
  CHECK(tspde_field_n(a) == 16);
  size_t count = 0;
  const double* va = tspde_field_values(a, &count);
  CHECK(count == 256);
  CHECK(fs::exists(dir / "field.tspd"));
  CHECK(fs::exists(dir / "radial.csv"));
  CHECK(fs::exists(dir / "manifest.json"));

  tspde_field* b = nullptr;
  REQUIRE(tspde_simulate(&cfg, nullptr, &b) == TSPDE_OK);
  const double* vb = tspde_field_values(b, &count);
  for (size_t i = 0; i < count; ++i) CHECK(va[i] == vb[i]);

  tspde_field* loaded = nullptr;
  REQUIRE(tspde_field_load((dir / "field.tspd").c_str(), &loaded) == TSPDE_OK);
  const double* vl = tspde_field_values(loaded, &count);
  for (size_t i = 0; i < count; ++i) CHECK(va[i] == vl[i]);

  double l2 = 0.0;
  CHECK(tspde_field_sobolev_norm(a, 0.0, &l2) == TSPDE_OK);
  CHECK(l2 > 0.0);

  REQUIRE(tspde_field_save(a, (dir / "copy.tspd").c_str()) == TSPDE_OK);
  CHECK(fs::file_size(dir / "copy.tspd") == 16 + 8 * 256);
  CHECK(tspde_field_save(a, "/nonexistent/dir/x.tspd") == TSPDE_ERR_IO);
  CHECK(tspde_field_load("/nonexistent/x.tspd", &loaded) == TSPDE_ERR_IO);
  CHECK(loaded == nullptr);

  tspde_field_free(a);
  tspde_field_free(b);
  tspde_field_free(nullptr);
  fs::remove_all(dir);
}

TEST_CASE("simulate errors") {
  tspde_sim_config cfg;
  tspde_sim_config_init(&cfg);
  tspde_field* f = nullptr;
  cfg.n = 15;
  CHECK(tspde_simulate(&cfg, nullptr, &f) == TSPDE_ERR_CONFIG);
  cfg.n = 16;
  cfg.dt = 0.3;
  cfg.t_final = 1.0;
  CHECK(tspde_simulate(&cfg, nullptr, &f) == TSPDE_ERR_CONFIG);
  cfg.dt = 0.1;
  cfg.ic = "bogus";
  CHECK(tspde_simulate(&cfg, nullptr, &f) == TSPDE_ERR_CONFIG);
  cfg.ic = "file:/nonexistent/u0.tspd";
  CHECK(tspde_simulate(&cfg, nullptr, &f) == TSPDE_ERR_IO);
  cfg.ic = nullptr;
  cfg.equation = TSPDE_DECOUPLED_AC;
  cfg.g = 20.0;
  cfg.sigma = 1.0;
  CHECK(tspde_simulate(&cfg, nullptr, &f) == TSPDE_ERR_NUMERICAL);
  cfg.g = 20.0;
  cfg.dt = 0.1;
  cfg.t_final = 0.1;
  CHECK(tspde_simulate(&cfg, nullptr, &f) == TSPDE_ERR_NUMERICAL);  // g dt = 2
  CHECK(f == nullptr);
  CHECK(tspde_simulate(nullptr, nullptr, &f) == TSPDE_ERR_CONFIG);
}

TEST_CASE("ensemble handle") {
  tspde_ensemble* e = nullptr;
  CHECK(tspde_ensemble_create("fig9", 0, &e) == TSPDE_ERR_CONFIG);
  REQUIRE(tspde_ensemble_create("heat1d_validation", 0, &e) == TSPDE_OK);
  char* text = nullptr;
  CHECK(tspde_ensemble_summary(e, &text) == TSPDE_ERR_CONFIG);
  CHECK(tspde_ensemble_set_realizations(e, 0) == TSPDE_ERR_CONFIG);
  CHECK(tspde_ensemble_set_realizations(e, 4) == TSPDE_OK);
  CHECK(tspde_ensemble_set_workers(e, -1) == TSPDE_ERR_CONFIG);
  CHECK(tspde_ensemble_set_workers(e, 2) == TSPDE_OK);
  CHECK(tspde_ensemble_set_seed(e, 77) == TSPDE_OK);
  const fs::path dir = scratch("ens");
  CHECK(tspde_ensemble_set_output_dir(e, dir.c_str()) == TSPDE_OK);
  REQUIRE(tspde_ensemble_run(e) == TSPDE_OK);
  REQUIRE(tspde_ensemble_summary(e, &text) == TSPDE_OK);
  CHECK(std::string(text).find("N=64") != std::string::npos);
  tspde_string_free(text);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "moments.csv"));
  tspde_ensemble_free(e);
  fs::remove_all(dir);
}

TEST_CASE("renormalization") {
  tspde_renorm_result r;
  REQUIRE(tspde_solve_cn(1.0, 1024, &r) == TSPDE_OK);
  CHECK(std::abs(r.c_n - 1.700229) < 1e-6);
  CHECK(r.residual < 1e-10);
  CHECK(std::abs(r.asymptotic - r.c_n) / r.c_n < 0.1);
  CHECK(tspde_solve_cn(-1.0, 64, &r) == TSPDE_ERR_CONFIG);
  const fs::path dir = scratch("renorm");
  REQUIRE(tspde_renorm_export(1.0, 64, "mode-energy", dir.c_str()) == TSPDE_OK);
  CHECK(fs::exists(dir / "renorm.json"));
  CHECK(fs::exists(dir / "curve_mode-energy.csv"));
  CHECK(tspde_write_curve("bogus", 1.0, 64, (dir / "x.csv").c_str()) == TSPDE_ERR_CONFIG);
  REQUIRE(tspde_write_curve("cn", 1.0, 64, (dir / "cn.csv").c_str()) == TSPDE_OK);
  std::ifstream in(dir / "cn.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,value,source_equation");
  fs::remove_all(dir);
}

TEST_CASE("analyze") {
  const fs::path dir = scratch("analyze");
  fs::create_directories(dir);
  {
    std::ofstream s(dir / "spectra.csv");
    s << "N,kappa,mean_energy,stderr,cardinality\n";
    for (int k = 1; k <= 22; ++k) s << 32 << ',' << k << ',' << 1.0 / (k * k) << ",0.01,8\n";
  }
  {
    std::ofstream c(dir / "curve.csv");
    c << "x,value,source_equation\n";
    for (int k = 1; k <= 22; ++k) c << k << ',' << 1.0 / (k * k) << ",synthetic\n";
  }
  char* report = nullptr;
  REQUIRE(tspde_analyze((dir / "spectra.csv").c_str(), 2, 10, (dir / "curve.csv").c_str(),
                        &report) == TSPDE_OK);
  const std::string text(report);
  tspde_string_free(report);
  CHECK(text.find("slope=-2") != std::string::npos);
  CHECK(text.find("x,measured,predicted,ratio") != std::string::npos);
  CHECK(tspde_analyze((dir / "spectra.csv").c_str(), 2, 3, nullptr, &report) ==
        TSPDE_ERR_CONFIG);
  CHECK(tspde_analyze((dir / "missing.csv").c_str(), 0, 0, nullptr, &report) == TSPDE_ERR_IO);
  fs::remove_all(dir);
}
