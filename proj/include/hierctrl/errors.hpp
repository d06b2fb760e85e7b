#pragma once

#include <stdexcept>
#include <string>

namespace hierctrl {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RegionError : std::runtime_error {
  explicit RegionError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver failed to reach its tolerance; carries last residual.
struct SolveError : std::runtime_error {
  SolveError(const std::string& what, double residual_, int iterations_)
      : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
  double residual;
  int iterations;
};

struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hierctrl
