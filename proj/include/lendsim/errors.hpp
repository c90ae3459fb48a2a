#pragma once

#include <stdexcept>
#include <string>

namespace lendsim {

// Error taxonomy mirrored by the CLI exit codes: config 2, schema 3, numeric 4.

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lendsim
