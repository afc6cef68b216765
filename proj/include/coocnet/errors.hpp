#pragma once

#include <stdexcept>
#include <string>

namespace coocnet {

/// Bad input data (malformed files, violated invariants in user data).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Unusable configuration (missing paths, out-of-range settings).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace coocnet
