#pragma once

#include <stdexcept>
#include <string>

namespace skqa {

/// Invalid arguments, malformed files, bad configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that ran but failed to meet its numerical contract
/// (non-convergence, residual above threshold, size cap exceeded).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skqa
