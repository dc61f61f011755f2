#pragma once

#include <stdexcept>
#include <string>

namespace simulab {

// Every failure the library reports derives from Error. The CLI maps
// SolverError to exit code 3 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (eta > 1, n > d, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Shapes or counts that do not fit together.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A precondition on the input object failed (rank bound exceeded, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A configured size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Iterative numerical routine failed to converge.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace simulab
