#pragma once

#include <source_location>
#include <stdexcept>
#include <string>

namespace regretlab {

// Base of every error thrown by the library. The throw site is kept so the
// command-line tool can report file:line context.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what,
                 std::source_location where = std::source_location::current())
      : std::runtime_error(what), where_(where) {}

  const std::source_location& where() const { return where_; }

 private:
  std::source_location where_;
};

// Bad input: violated preconditions, malformed configs.
class ValidationError : public Error {
  using Error::Error;
};

// A numerical procedure failed to deliver a trustworthy answer.
class NumericalError : public Error {
  using Error::Error;
};

class BoundViolation : public ValidationError {
  using ValidationError::ValidationError;
};
class IdenticalExperts : public ValidationError {
  using ValidationError::ValidationError;
};
class DepthExceeded : public ValidationError {
  using ValidationError::ValidationError;
};
class NotClosedWalk : public ValidationError {
  using ValidationError::ValidationError;
};
class InvalidWalk : public ValidationError {
  using ValidationError::ValidationError;
};
class UnsupportedDepth : public ValidationError {
  using ValidationError::ValidationError;
};
class FinalDataViolation : public ValidationError {
  using ValidationError::ValidationError;
};

class NumericalDegeneracy : public NumericalError {
  using NumericalError::NumericalError;
};
class FoliationViolation : public NumericalError {
  using NumericalError::NumericalError;
};
class GridOutOfRange : public NumericalError {
  using NumericalError::NumericalError;
};
class DerivativeUnavailable : public NumericalError {
  using NumericalError::NumericalError;
};
class UnboundedEstimate : public NumericalError {
  using NumericalError::NumericalError;
};

// run_game wraps policy failures with the step at which they happened.
class PolicyError : public NumericalError {
 public:
  PolicyError(int step, const std::string& what,
              std::source_location where = std::source_location::current())
      : NumericalError("step " + std::to_string(step) + ": " + what, where),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace regretlab
