#pragma once

#include <stdexcept>
#include <string>

namespace totlab {

/// Invalid input: bad dimensions, out-of-range indices, malformed files.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation or scenario check failed at run time.
class RuntimeError : public std::runtime_error {
 public:
  explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace totlab
