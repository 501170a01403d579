#pragma once

#include <stdexcept>
#include <string>

namespace jinv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// bad argument for the mathematical operation (z = 0 for log, Im tau <= 0, ...)
class DomainError : public Error {
 public:
  using Error::Error;
};

// a derivative or denominator vanished at working precision
class NumericalError : public Error {
 public:
  using Error::Error;
};

// the requested or supplied precision cannot support a certified answer
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class CertificationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// rational data that no quadratic form reproduces
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace jinv
