#pragma once

#include <stdexcept>
#include <string>

namespace harvestsim {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sim-kernel
class InvalidTime : public Error { using Error::Error; };
class SchedulingInPast : public Error { using Error::Error; };
class InvalidRange : public Error { using Error::Error; };

// energy sources and devices
class NegativeDuration : public Error { using Error::Error; };
class NegativePower : public Error { using Error::Error; };
class UnknownDevice : public Error { using Error::Error; };
class UnknownState : public Error { using Error::Error; };
class InvalidParameter : public Error { using Error::Error; };

// harvesters and predictor
class SlotInFuture : public Error { using Error::Error; };
class NegativeEnergy : public Error { using Error::Error; };
class EmptyStore : public Error { using Error::Error; };

/// Raised by the scenario loader. `path()` is the dotted field path, `line()`
/// the 1-based line in the config file (0 when unknown).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string path, int line)
      : Error(what), path_(std::move(path)), line_(line) {}
  const std::string& path() const noexcept { return path_; }
  int line() const noexcept { return line_; }

 private:
  std::string path_;
  int line_;
};

class ParseError : public ConfigError { using ConfigError::ConfigError; };
class ValidationError : public ConfigError { using ConfigError::ConfigError; };

/// Raised while reading a harvest trace file; `line()` is 1-based.
class TraceError : public Error {
 public:
  TraceError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class TraceParseError : public TraceError { using TraceError::TraceError; };
class MonotonicityError : public TraceError { using TraceError::TraceError; };
class NegativePowerError : public TraceError { using TraceError::TraceError; };

class IoError : public Error { using Error::Error; };

}  // namespace harvestsim
