#pragma once

#include <stdexcept>
#include <string>

namespace smplab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent parameters: mismatched k, mode, lengths, out-of-range values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A protocol needs a randomness mode that the requested operation cannot handle.
class UnsupportedModeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Matrix shape problems (non-square, dimension mismatch).
class ShapeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Enumeration budgets, dimension caps and string-length capacity.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A protocol broke one of its own declared contracts while running.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace smplab
