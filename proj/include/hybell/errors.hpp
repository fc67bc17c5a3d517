#pragma once

#include <stdexcept>
#include <string>

namespace hybell {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its physical range (probabilities, angles, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The Fock-space truncation discards more weight than the caller allows.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A+ is (numerically) empty or the full line, so |Xi> is undefined.
class DegenerateBinningError : public Error {
 public:
  using Error::Error;
};

class NonHermitianError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NoViolationError : public Error {
 public:
  using Error::Error;
};

class MemoryBudgetError : public Error {
 public:
  using Error::Error;
};

class CheckpointMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace hybell
