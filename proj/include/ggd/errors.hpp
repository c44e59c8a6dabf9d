#pragma once

#include <stdexcept>
#include <string>

namespace ggd {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative procedure (series, quadrature, tabulation) ran out of budget.
// Carries the best estimate reached and, where meaningful, a bound on its error.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what, double best_estimate = 0.0,
                            double error_bound = 0.0)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

// Caller asked for something that does not exist (bad suite name, empty data, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ggd
