#pragma once

#include <stdexcept>
#include <string>

namespace sigma {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input structure (rotation lists, unknown endpoints, bad files).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Input data violates a domain invariant (e.g. Σ(v) not inside N(v)).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Something that cannot happen on valid inputs happened; indicates a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A configured enumeration or search budget was exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace sigma
