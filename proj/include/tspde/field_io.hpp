#pragma once

#include <filesystem>
#include <iosfwd>

#include "tspde/grid.hpp"
#include "tspde/spectral.hpp"

namespace tspde {

// Field snapshot: 16-byte header (magic "TSPD", u32 d, u32 N, u32 reserved)
// followed by N^d little-endian float64 values in storage order.
void write_snapshot(const RealField& f, std::ostream& out);
void write_snapshot(const RealField& f, const std::filesystem::path& path);
RealField read_snapshot(std::istream& in);
RealField read_snapshot(const std::filesystem::path& path);

// Radial spectrum CSV, header `kappa,energy,cardinality,stderr`; stderr is
// left empty when absent. Values are written with 17 significant digits.
void write_radial_csv(const RadialSpectrum& R, std::ostream& out);
void write_radial_csv(const RadialSpectrum& R, const std::filesystem::path& path);
/// Reads bins back; the grid must be supplied since the CSV does not carry it.
RadialSpectrum read_radial_csv(std::istream& in, const GridSpec& grid);

/// Copy of f with every value clamped to [lo, hi]. Export filter only.
RealField clamped(const RealField& f, double lo, double hi);

}  // namespace tspde
