#pragma once

#include <stdexcept>
#include <string>

namespace ntbench {

/// Invalid user-supplied parameters (CLI exit status 2).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed its enumeration budget (CLI exit status 3).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal cross-check failed (CLI exit status 4).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ntbench
