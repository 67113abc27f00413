#include "tspde/error.hpp"

namespace tspde {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::singular_factor:
    case ErrorKind::numerical:
      return 3;
    case ErrorKind::io:
      return 4;
    default:
      return 2;
  }
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::unsupported_dimension: return "unsupported-dimension";
    case ErrorKind::symmetry_violation: return "symmetry-violation";
    case ErrorKind::axis_mismatch: return "axis-mismatch";
    case ErrorKind::singular_factor: return "singular-factor";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace tspde
