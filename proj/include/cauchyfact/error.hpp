#pragma once

#include <stdexcept>
#include <string>

namespace cauchyfact {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (curve files, manifests, CSV).
class ParseError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A grid cannot host the requested construction (too narrow, too many nodes).
class GridError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A numerically checked invariant failed. The message names the invariant.
class NumericalAssertion : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

inline void ensure(bool ok, const std::string& invariant) {
  if (!ok) throw NumericalAssertion(invariant);
}

}  // namespace detail
}  // namespace cauchyfact
