#pragma once

#include <stdexcept>
#include <string>

namespace funcox {

/// Invalid configuration (bad basis size, bad penalty parameters, ...).
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Invalid data passed to an operation (dimension mismatch, NaN, ...).
struct InputError : std::invalid_argument {
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure (factorization breakdown, divergence, ...).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace funcox
