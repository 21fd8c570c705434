#pragma once

#include <stdexcept>
#include <string>

namespace band {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad parameter values, unknown path-loss exponents, malformed files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Instance generation failed (degenerate configuration).
class GenerationError : public Error {
 public:
  explicit GenerationError(const std::string& what) : Error(what) {}
};

/// Model cannot be built (e.g. a positive-demand couple is unreachable).
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(what) {}
};

/// Internal solver failure (numerical breakdown that could not be recovered).
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(what) {}
};

}  // namespace band
