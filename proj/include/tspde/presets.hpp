#pragma once

#include <string>
#include <vector>

#include "tspde/ensemble.hpp"

namespace tspde {

/// fig1, fig2, fig3, fig4, fig4f, heat1d_validation.
const std::vector<std::string>& preset_names();

/// Largest N a preset runs unless `full` is set.
inline constexpr int desk_max_n = 256;

/// Caption configuration of a figure experiment. Grid lists stop at
/// desk_max_n unless `full`. Throws Error(config) for unknown names.
ExperimentConfig preset(const std::string& name, bool full = false);

/// "zero", "sin2x" or "file:<snapshot path>".
InitialCondition initial_condition_from_label(const std::string& label);

}  // namespace tspde
