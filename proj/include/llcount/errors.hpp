#pragma once

#include <stdexcept>
#include <string>

namespace llc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (DIMACS, edge lists, JSON specs).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A caller violated a precondition (out-of-range vertex, T = 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable intermediate value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis failed and the caller did not force the run.
/// `report` carries a human-readable description of the offending items.
class HypothesisError : public Error {
 public:
  HypothesisError(const std::string& what, std::string report)
      : Error(what), report_(std::move(report)) {}
  const std::string& report() const noexcept { return report_; }

 private:
  std::string report_;
};

}  // namespace llc
