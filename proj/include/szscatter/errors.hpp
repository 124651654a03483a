#pragma once

#include <stdexcept>
#include <string>

namespace szscatter {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failures: the inputs were valid but the computation could not complete.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class AsymptoticallyClosedChannel : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoDecay : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TurningPoint : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GaugeDegenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ComplexGaugeRejected : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmptyFamily : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InadmissibleFamily : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An exact result fell outside a rigorous bound. Always a bug.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::string field, const std::string& what = "invalid value")
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace szscatter
