#include "tspde/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "tspde/error.hpp"

namespace tspde {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'S', 'P', 'D'};

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(ErrorKind::io, "snapshot: truncated header");
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

void write_snapshot(const RealField& f, std::ostream& out) {
  out.write(kMagic.data(), 4);
  put_u32(out, std::uint32_t(f.grid().dim()));
  put_u32(out, std::uint32_t(f.grid().n()));
  put_u32(out, 0);
  for (double v : f.values()) put_f64(out, v);
  if (!out) throw Error(ErrorKind::io, "snapshot: write failed");
}

void write_snapshot(const RealField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  write_snapshot(f, out);
}

RealField read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic) {
    throw Error(ErrorKind::io, "snapshot: bad magic");
  }
  const auto d = get_u32(in);
  const auto n = get_u32(in);
  get_u32(in);
  if (d < 1 || d > 2 || n < 2 || n % 2 != 0 || n > (1u << 16)) {
    throw Error(ErrorKind::io, "snapshot: invalid header (d=" + std::to_string(d) +
                                   ", N=" + std::to_string(n) + ")");
  }
  const GridSpec grid{int(d), int(n)};
  std::vector<unsigned char> raw(grid.size() * 8);
  if (!in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()))) {
    throw Error(ErrorKind::io, "snapshot: truncated payload");
  }
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(raw[8 * i + b]) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
  return RealField(grid, std::move(values));
}

RealField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  try {
    return read_snapshot(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_radial_csv(const RadialSpectrum& R, std::ostream& out) {
  out << "kappa,energy,cardinality,stderr\n";
  for (const auto& b : R.bins) {
    out << b.kappa << ',' << format_double(b.energy) << ',' << b.cardinality << ',';
    if (b.std_error) out << format_double(*b.std_error);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "radial CSV: write failed");
}

void write_radial_csv(const RadialSpectrum& R, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  write_radial_csv(R, out);
}

RadialSpectrum read_radial_csv(std::istream& in, const GridSpec& grid) {
  std::string line;
  if (!std::getline(in, line) || line != "kappa,energy,cardinality,stderr") {
    throw Error(ErrorKind::io, "radial CSV: unexpected header");
  }
  RadialSpectrum R{grid, {}};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<std::string, 4> cols;
    std::size_t start = 0;
    for (int c = 0; c < 4; ++c) {
      const auto comma = c < 3 ? line.find(',', start) : std::string::npos;
      if (c < 3 && comma == std::string::npos) {
        throw Error(ErrorKind::io, "radial CSV: malformed row '" + line + "'");
      }
      cols[c] = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                : comma - start);
      start = comma + 1;
    }
    RadialBin b;
    try {
      b.kappa = std::stoi(cols[0]);
      b.energy = std::stod(cols[1]);
      b.cardinality = std::stoll(cols[2]);
      if (!cols[3].empty()) b.std_error = std::stod(cols[3]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::io, "radial CSV: malformed row '" + line + "'");
    }
    R.bins.push_back(b);
  }
  return R;
}

RealField clamped(const RealField& f, double lo, double hi) {
  RealField out = f;
  for (double& v : out.values()) v = std::clamp(v, lo, hi);
  return out;
}

}  // namespace tspde
