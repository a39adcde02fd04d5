#pragma once

#include <stdexcept>
#include <string>

namespace fuscens {

// Common base so callers can catch everything from this library at once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside a documented precondition (bad descriptor, wrong shapes,
// singular map where an isomorphism is required, ...).
struct DomainError : Error {
  using Error::Error;
};

// An enumeration or scan would exceed a configured cap.  Caps are
// configuration, not silent truncation points; callers decide what to do.
struct ResourceError : Error {
  using Error::Error;
};

// A normal-form computation could not be carried out (e.g. the block that
// must be inverted is not invertible).
struct NormalFormError : Error {
  using Error::Error;
};

// A congruence solver found no solution where one was requested.
struct SolveError : Error {
  using Error::Error;
};

// Valid input that this implementation deliberately does not cover.
struct UnsupportedError : Error {
  using Error::Error;
};

// Floating-point iteration failed to converge within its budget.
struct NumericError : Error {
  using Error::Error;
};

// An internal cross-check failed; indicates a bug, not bad input.
struct ConsistencyError : Error {
  using Error::Error;
};

// A denominator that the construction assumes to be invertible vanished.
struct SingularityError : Error {
  using Error::Error;
};

}  // namespace fuscens
