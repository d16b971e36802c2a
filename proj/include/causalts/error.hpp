#pragma once

#include <stdexcept>
#include <string>

namespace causalts {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes (input errors -> 1, numerical failures -> 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (log of a
// nonpositive value, logit at the boundary, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Too few observations for the requested operation.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Constant or zero-variance input where variation is required.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Numerical estimation failed (singular design, non-positive-definite
// moment matrix, ...).
class EstimationError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition (invalid rank, bad index, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or input file.
class InputError : public Error {
 public:
  using Error::Error;
};

// Dimension combination outside the embedded critical-value tables.
class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace causalts
