#include "tspde/presets.hpp"

#include <numbers>

#include "tspde/error.hpp"
#include "tspde/field_io.hpp"

namespace tspde {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<int> powers_of_two(int lo, int hi, bool full) {
  std::vector<int> out;
  for (int n = lo; n <= hi; n *= 2) {
    if (full || n <= desk_max_n) out.push_back(n);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1", "fig2",  "fig3",
                                                 "fig4", "fig4f", "heat1d_validation"};
  return names;
}

ExperimentConfig preset(const std::string& name, bool full) {
  ExperimentConfig c;
  c.preset = name;
  c.dim = 2;
  SchemeConfig& s = c.scheme;
  if (name == "fig1") {
    s = {Equation::heat, 0.5, 1.0, pi / 50.0, 1.0, 2000, false};
    c.grid_sizes = powers_of_two(32, 2048, full);
    c.realizations = 40;
  } else if (name == "fig2") {
    s = {Equation::decoupled_ac, 0.0, 0.1, pi / 5.0, 2.0, 4000, false};
    c.grid_sizes = powers_of_two(32, 2048, full);
    c.realizations = 40;
  } else if (name == "fig3") {
    s = {Equation::allen_cahn, 6.4e-3, 0.5, 2.0 * pi / 5.0, 1.0, 2000, true};
    c.grid_sizes = powers_of_two(32, 2048, full);
    c.realizations = 40;
  } else if (name == "fig4") {
    s = {Equation::allen_cahn, 6.4e-3, 0.5, pi / 8.0, 1.0, 1000, true};
    c.ic = InitialCondition::sin_2x();
    c.grid_sizes = powers_of_two(8, 512, full);
    c.realizations = 1;
  } else if (name == "fig4f") {
    s = {Equation::allen_cahn, 6.4e-3, 0.5, pi / 8.0, 1.0, 1000, true};
    c.ic = InitialCondition::sin_2x();
    c.grid_sizes = {8, 32, 128};
    c.realizations = 120;
    c.intervals = 4;
  } else if (name == "heat1d_validation") {
    s = {Equation::heat, 1.0, 1.0, 0.5, 1.0, 1000, false};
    c.dim = 1;
    c.grid_sizes = {64};
    c.realizations = 400;
  } else {
    throw Error(ErrorKind::config, "unknown preset '" + name + "'");
  }
  return c;
}

InitialCondition initial_condition_from_label(const std::string& label) {
  if (label == "zero") return InitialCondition::zero();
  if (label == "sin2x") return InitialCondition::sin_2x();
  if (label.rfind("file:", 0) == 0) {
    return InitialCondition::snapshot(read_snapshot(label.substr(5)), label);
  }
  throw Error(ErrorKind::config, "unknown initial condition '" + label + "'");
}

}  // namespace tspde
