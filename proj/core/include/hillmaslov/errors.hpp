#pragma once

#include <stdexcept>
#include <string>

namespace hillmaslov {

// Numerical failures (non-convergence, integrator disagreement, broken
// invariants). The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class ConvergenceError : public NumericalError {
 public:
  explicit ConvergenceError(const std::string& what) : NumericalError(what) {}
};

class IntegrationError : public NumericalError {
 public:
  explicit IntegrationError(const std::string& what) : NumericalError(what) {}
};

// Bad run configuration (unknown keys, out-of-range values, unparseable
// files). The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hillmaslov
