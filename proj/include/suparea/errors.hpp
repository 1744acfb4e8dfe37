#pragma once

#include <stdexcept>
#include <string>

#include "suparea/estimate.hpp"

namespace suparea {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures of a numerical method (as opposed to bad input).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method ran out of budget. Carries the best estimate reached.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, EstimateWithError best)
      : NumericalError(what), best_(best) {}

  const EstimateWithError& best() const noexcept { return best_; }

 private:
  EstimateWithError best_;
};

/// Alternating-series evaluation lost too many digits to cancellation.
class CancellationError : public NumericalError {
 public:
  CancellationError(const std::string& what, double index)
      : NumericalError(what), index_(index) {}

  /// max |term| / |sum| at the point of failure
  double index() const noexcept { return index_; }

 private:
  double index_;
};

/// Laplace inversion could not be carried out stably on the requested grid.
class ContourInstabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A simulation guardrail (point-count cap, rejection budget, hit count) tripped.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace suparea
