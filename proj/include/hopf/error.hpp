#pragma once

#include <stdexcept>
#include <string>

namespace hopf {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An index lies outside the set it is meant to address.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two objects disagree on the sets they are defined over.
class TypeMismatch : public Error {
 public:
  using Error::Error;
};

/// A value violates an invariant of its type at construction.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an input it is not defined for
/// (e.g. an unchecked or invalid process function).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive check would exceed the elementary-check budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A dec-POMDP lacks factored observation tables.
class NotObservationIndependent : public Error {
 public:
  using Error::Error;
};

/// The fixed-point solve inside a link step found zero or several solutions.
class ConsistencyViolation : public Error {
 public:
  using Error::Error;
};

/// A strategy search had no candidates to choose from.
class NoStrategy : public Error {
 public:
  using Error::Error;
};

/// Malformed document (syntax or schema).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hopf
