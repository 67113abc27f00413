#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tspde/ensemble.hpp"
#include "tspde/renorm.hpp"

namespace tspde {

const char* software_version() noexcept;

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) noexcept;
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

// CSV artifacts. All values use 17 significant digits.
//   spectra    N,kappa,mean_energy,stderr,cardinality
//   intervals  N,interval_index,mean,stderr
//   moments    N,observable,mean,stderr
//   curves     x,value,source_equation
//   overlay    x,measured,predicted,ratio   (ratio empty when undefined)
void write_spectra_csv(const EnsembleStats& stats, std::ostream& out);
std::vector<SpectrumStats> read_spectra_csv(std::istream& in);
std::vector<SpectrumStats> read_spectra_csv(const std::filesystem::path& path);
void write_intervals_csv(const EnsembleStats& stats, std::ostream& out);
void write_moments_csv(const EnsembleStats& stats, std::ostream& out);
void write_curve_csv(const PredictionCurve& curve, std::ostream& out);
void write_curve_csv(const PredictionCurve& curve, const std::filesystem::path& path);
PredictionCurve read_curve_csv(std::istream& in);
PredictionCurve read_curve_csv(const std::filesystem::path& path);
void write_overlay_csv(const std::vector<OverlayRow>& rows, std::ostream& out);

struct ExportReport {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
};

/// Write spectra/intervals/moments CSVs and one snapshot per N into
/// config.output_dir, then manifest.json (config echo, seeds, checksums,
/// wall clock, version). The manifest is written last.
ExportReport export_ensemble(const ExperimentConfig& config, const EnsembleStats& stats,
                             double wall_seconds);

/// Single run: field.tspd, radial.csv (d = 2) and manifest.json.
ExportReport export_simulation(const ExperimentConfig& config, const RealField& field,
                               double wall_seconds);

/// Configuration echoed in a manifest.
ExperimentConfig read_manifest_config(const std::filesystem::path& manifest);

/// Recompute one realization from the manifest alone.
RealField replay_realization(const std::filesystem::path& manifest, int N, int realization);

}  // namespace tspde
