#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>

namespace zakai {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of R^d passed to model coefficients and basis evaluators.
using Point = std::span<const double>;

/// Raised when an argument violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation produces a non-finite or otherwise unusable value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The normalizing functional of the filter fell below its floor.
class DegenerateNormalization : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace zakai
