#pragma once

#include <stdexcept>
#include <string>

namespace evac {

/// Invalid or unsatisfiable configuration (bad config file, impossible
/// placement constraints, unknown scenario).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evac
