#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace liouville {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParityError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class AlignmentError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class UnsupportedError : public Error { using Error::Error; };
class StabilityError : public Error { using Error::Error; };
class SolverError : public Error { using Error::Error; };
class ParseError : public Error { using Error::Error; };
class ResourceError : public Error { using Error::Error; };

/// Raised when an iterative eigenvalue estimate fails to settle.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace liouville
