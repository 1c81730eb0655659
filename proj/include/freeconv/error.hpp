#pragma once

#include <stdexcept>
#include <string>

namespace freeconv {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Square root requested on (or within 1e-14 of) the cut [0, inf).
class BranchCutError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Measure with zero variance where a nondegenerate one is required.
class DegenerateMeasureError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Point outside the disc where a truncated Laurent series is valid.
class OutOfDiscError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Subordination iteration did not reach tolerance.
class IterationFailure : public Error {
 public:
  IterationFailure(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// Stieltjes-Perron inversion produced a significantly negative density.
class InversionError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace freeconv
