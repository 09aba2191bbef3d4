#pragma once

#include <stdexcept>
#include <string>

namespace arbor {

/// Malformed or out-of-domain input (bad file, non-prime ell, zero vector...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed its configured memory/size budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation finished but produced nothing to report (e.g. a scan with no good primes).
class EmptyResultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace arbor
