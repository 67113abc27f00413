#pragma once

#include <stdexcept>
#include <string>

namespace tspde {

/// Failure categories. The numeric values of the coarse classes double as
/// process exit codes for the command-line tool.
enum class ErrorKind {
  config,                 // invalid parameters or preconditions
  domain,                 // argument outside the mathematical domain
  grid_mismatch,          // operands live on different grids
  unsupported_dimension,  // operation defined only for another dimension
  symmetry_violation,     // spectral data is not Hermitian
  axis_mismatch,          // curves share no abscissae
  singular_factor,        // an implicit time-stepping factor vanishes
  numerical,              // non-finite values or non-convergence
  io,                     // file system or format errors
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// 2 for configuration-type errors, 3 for numerical failures, 4 for I/O.
int exit_code(ErrorKind kind) noexcept;

const char* to_string(ErrorKind kind) noexcept;

}  // namespace tspde
