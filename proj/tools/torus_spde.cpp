// torus-spde: command-line front end over the C interface.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "tspde/tspde.h"

namespace {

int report(tspde_status s) {
  if (s != TSPDE_OK) std::cerr << "torus-spde: " << tspde_last_error() << '\n';
  return int(s);
}

int print_and_free(tspde_status s, char* text) {
  if (s == TSPDE_OK && text) std::cout << text;
  tspde_string_free(text);
  return report(s);
}

bool parse_range(const std::string& spec, int& lo, int& hi) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return false;
  try {
    std::size_t used = 0;
    lo = std::stoi(spec.substr(0, colon), &used);
    if (used != colon) return false;
    const std::string rest = spec.substr(colon + 1);
    hi = std::stoi(rest, &used);
    return used == rest.size() && lo >= 1 && hi >= lo;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and analyze white-noise driven SPDEs on the periodic torus"};
  app.set_version_flag("--version", std::string(tspde_version()));
  app.require_subcommand(1);

  // simulate
  tspde_sim_config sim;
  tspde_sim_config_init(&sim);
  std::string equation, ic = "zero", dealias, sim_out;
  auto* simulate = app.add_subcommand("simulate", "Integrate a single realization");
  simulate->add_option("--equation", equation, "heat | dac | ac")
      ->required()
      ->check(CLI::IsMember({"heat", "dac", "ac"}));
  simulate->add_option("--dim", sim.dim, "Dimension")->check(CLI::IsMember({1, 2}));
  simulate->add_option("--n", sim.n, "Grid points per axis (even)")->required();
  simulate->add_option("--dt", sim.dt, "Time step")->required();
  simulate->add_option("--t-final", sim.t_final, "Final time")->required();
  simulate->add_option("--sigma", sim.sigma, "Noise intensity");
  simulate->add_option("--alpha", sim.alpha, "Diffusion rate");
  simulate->add_option("--g", sim.g, "Reaction rate");
  simulate->add_option("--ic", ic, "zero | sin2x | file:<path>");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--dealias", dealias, "on | off")->check(CLI::IsMember({"on", "off"}));
  simulate->add_option("--out", sim_out, "Output directory")->required();

  // ensemble
  std::string preset_name, ens_out;
  bool full = false;
  int realizations = 0, workers = 0;
  std::uint64_t ens_seed = 0;
  auto* ensemble = app.add_subcommand("ensemble", "Run a figure preset ensemble");
  ensemble->add_option("--preset", preset_name, "Preset name")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig4f", "heat1d_validation"}));
  ensemble->add_flag("--full", full, "Use the caption grid sizes up to N = 2048");
  ensemble->add_option("--realizations", realizations, "Override the realization count");
  ensemble->add_option("--workers", workers, "Worker threads (0 = all cores)");
  ensemble->add_option("--seed", ens_seed, "Master seed")->required();
  ensemble->add_option("--out", ens_out, "Output directory")->required();

  // renorm
  double rn_sigma = 0.0;
  int rn_n = 0;
  std::string curve, rn_out;
  auto* renorm = app.add_subcommand("renorm", "Renormalization constant and prediction curves");
  renorm->add_option("--sigma", rn_sigma, "Noise intensity")->required();
  renorm->add_option("--n", rn_n, "Cutoff N")->required();
  renorm->add_option("--curve", curve, "cn | mode-energy | norm | heat-series")
      ->check(CLI::IsMember({"cn", "mode-energy", "norm", "heat-series"}));
  renorm->add_option("--out", rn_out, "Output directory")->required();

  // analyze
  std::string spectra, fit, overlay;
  auto* analyze = app.add_subcommand("analyze", "Error bars, slope fits and overlays");
  analyze->add_option("--spectra", spectra, "Spectra CSV")->required();
  analyze->add_option("--fit", fit, "kmin:kmax");
  analyze->add_option("--overlay", overlay, "Prediction curve CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return TSPDE_ERR_CONFIG;
  }

  if (simulate->parsed()) {
    if (report(tspde_parse_equation(equation.c_str(), &sim.equation))) return TSPDE_ERR_CONFIG;
    sim.ic = ic.c_str();
    sim.dealias = dealias.empty() ? -1 : dealias == "on";
    tspde_field* field = nullptr;
    const tspde_status s = tspde_simulate(&sim, sim_out.c_str(), &field);
    if (s == TSPDE_OK) {
      double l2 = 0.0;
      tspde_field_sobolev_norm(field, 0.0, &l2);
      std::printf("%s d=%d N=%d T=%g: |u|_0 = %.10g, written to %s\n", equation.c_str(),
                  sim.dim, sim.n, sim.t_final, l2, sim_out.c_str());
    }
    tspde_field_free(field);
    return report(s);
  }

  if (ensemble->parsed()) {
    tspde_ensemble* e = nullptr;
    tspde_status s = tspde_ensemble_create(preset_name.c_str(), full ? 1 : 0, &e);
    if (s == TSPDE_OK && ensemble->count("--realizations") > 0) {
      s = tspde_ensemble_set_realizations(e, realizations);
    }
    if (s == TSPDE_OK) s = tspde_ensemble_set_workers(e, workers);
    if (s == TSPDE_OK) s = tspde_ensemble_set_seed(e, ens_seed);
    if (s == TSPDE_OK) s = tspde_ensemble_set_output_dir(e, ens_out.c_str());
    if (s == TSPDE_OK) s = tspde_ensemble_run(e);
    char* text = nullptr;
    if (s == TSPDE_OK) s = tspde_ensemble_summary(e, &text);
    const int code = print_and_free(s, text);
    tspde_ensemble_free(e);
    return code;
  }

  if (renorm->parsed()) {
    tspde_renorm_result r;
    tspde_status s = tspde_solve_cn(rn_sigma, rn_n, &r);
    if (s == TSPDE_OK) {
      s = tspde_renorm_export(rn_sigma, rn_n, curve.empty() ? nullptr : curve.c_str(),
                              rn_out.c_str());
    }
    if (s == TSPDE_OK) {
      std::printf("sigma=%g N=%d C_N=%.15g residual=%.3g iterations=%d\n", r.sigma, r.n, r.c_n,
                  r.residual, r.iterations);
      std::printf("asymptotic refined=%.10g leading=%.10g\n", r.asymptotic, r.leading);
    }
    return report(s);
  }

  int kmin = 0, kmax = 0;
  if (!fit.empty() && !parse_range(fit, kmin, kmax)) {
    std::cerr << "torus-spde: --fit expects kmin:kmax with 1 <= kmin <= kmax\n";
    return TSPDE_ERR_CONFIG;
  }
  char* text = nullptr;
  const tspde_status s = tspde_analyze(spectra.c_str(), kmin, kmax,
                                       overlay.empty() ? nullptr : overlay.c_str(), &text);
  return print_and_free(s, text);
}
