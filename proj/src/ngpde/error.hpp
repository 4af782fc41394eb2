#pragma once

#include <stdexcept>
#include <string>

namespace ngpde {

// Values double as the C API status codes and the CLI exit codes.
enum class ErrorCode : int {
  validation = 1,
  numerical = 2,
  no_steady_state = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Invalid input: bad parameters, violated preconditions, out-of-domain points.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::validation, what) {}
};

/// A mathematical precondition failed (e.g. g(t) <= 0, vanishing first moment).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Integration failure, accuracy check failure or truncation leakage.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::numerical, what) {}
};

class NoSteadyStateError : public Error {
 public:
  explicit NoSteadyStateError(const std::string& what)
      : Error(ErrorCode::no_steady_state, what) {}
};

}  // namespace ngpde
