#pragma once

#include <stdexcept>
#include <string>

namespace maxtree {

/// Base of every exception thrown by the library. The CLI maps all of these
/// to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A tree would exceed the configured node budget.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Input lengths or piece counts do not match the tree they are paired with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Moments (f, F) violate Jensen's inequality f^p <= F.
class InfeasibleMomentsError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A power-law integral diverges (a * p >= 1).
class DivergentIntegralError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A root finder or minimizer could not bracket or converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or spec string. The message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace maxtree
