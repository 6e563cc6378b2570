#pragma once

#include <stdexcept>
#include <string>

namespace cfcg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar parameter is outside its admissible range (e.g. alpha not in (0,1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Some coordinate sits closer to its lower terminal than the guard allows.
class SingularTerminal : public Error {
 public:
  SingularTerminal(std::string what, long coordinate)
      : Error(std::move(what)), coordinate_(coordinate) {}
  long coordinate() const noexcept { return coordinate_; }

 private:
  long coordinate_;
};

/// A conjugate-gradient denominator vanished relative to its factors.
class DenominatorUnderflow : public Error {
 public:
  using Error::Error;
};

/// A contract precondition was violated by the caller.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class LineSearchFailure : public Error {
 public:
  LineSearchFailure(std::string what, int trials)
      : Error(std::move(what)), trials_(trials) {}
  int trials() const noexcept { return trials_; }

 private:
  int trials_;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration; carries the offending line (0 if not file-based) and key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::string field, int line = 0);
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace cfcg
