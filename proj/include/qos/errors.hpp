#pragma once

#include <stdexcept>
#include <string>

namespace qos {

// Bad input: out-of-range arguments, malformed files, dimension mismatches.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An algorithm was handed a game outside the class it is defined for
// (e.g. Algorithm 1 on heterogeneous channels).
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Exhaustive search refused because the search space exceeds the budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proof-carrying invariant failed at runtime. Always an implementation bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qos
