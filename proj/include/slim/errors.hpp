#pragma once

#include <stdexcept>
#include <string>

namespace slim {

/// Malformed or inconsistent input data (bad CSV cell, dimension mismatch).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace slim
