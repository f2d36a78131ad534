#pragma once

#include <stdexcept>
#include <string>

namespace fixstep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Raised when a matrix fails the SPD certificate (Cholesky pivot <= 0 or NaN)
// or is not exactly symmetric.
class NotSpd : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// Config errors always carry the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace fixstep
