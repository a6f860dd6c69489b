#pragma once

#include <stdexcept>
#include <string>

namespace blm {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A Cholesky pivot was not positive. `column` is the zero-based column at
/// which factorization failed.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, int column)
      : Error(what), column(column) {}
  int column;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An argument was outside the mathematical domain of the operation
/// (probabilities outside (0,1), asymmetric input, nonpositive shapes, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Density evaluated at a point outside the distribution's support.
class NegativeSupport : public Error {
 public:
  using Error::Error;
};

/// X'X is not invertible in the least-squares decomposition.
class SingularDesign : public Error {
 public:
  using Error::Error;
};

/// Operation requires an unknown precision but the model fixes lambda.
class LambdaFixed : public Error {
 public:
  using Error::Error;
};

class EmptyModelList : public Error {
 public:
  using Error::Error;
};

/// Candidate models do not share the correlation matrix and lambda prior
/// required for an evidence comparison.
class IncompatibleComparison : public Error {
 public:
  using Error::Error;
};

}  // namespace blm
