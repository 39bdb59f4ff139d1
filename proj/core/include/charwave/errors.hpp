#pragma once

#include <stdexcept>
#include <string>

namespace charwave {

// Caller broke a precondition: wrong axis kind, shape mismatch, CFL violation.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A field went non-finite during a computation.
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace charwave
