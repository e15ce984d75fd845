#pragma once

#include <stdexcept>
#include <string>

namespace invfrac {

/// Argument outside the domain where an operation is defined (n < 1, lambda <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive refinement ran out of budget before reaching the requested tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid-refinement search exhausted its evaluation or level budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constraint set is empty (e.g. mass normalisation on a non-positive domain).
class Infeasible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed field file, config value or CSV input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace invfrac
