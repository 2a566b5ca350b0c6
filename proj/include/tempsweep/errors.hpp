#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tempsweep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation on an operation input (empty vector, bad range, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A statistic whose defining denominator vanished (zero variance, zero mean).
/// Kept distinct from NaN propagation so callers can flag rows as "undefined".
class UndefinedStatError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Endpoint unreachable or persistently failing after retries.
class EndpointError : public Error {
 public:
  using Error::Error;
};

/// Judge reply could not be parsed as a definite yes/no after retries.
class JudgeAbstainError : public EndpointError {
 public:
  using EndpointError::EndpointError;
};

/// Remote classifier reply was not one of the six ability codes.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

/// Performance table is missing cells required for a selection.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, std::vector<std::string> missing)
      : Error(what), missing_cells_(std::move(missing)) {}
  const std::vector<std::string>& missing_cells() const { return missing_cells_; }

 private:
  std::vector<std::string> missing_cells_;
};

}  // namespace tempsweep
