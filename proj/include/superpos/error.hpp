#pragma once

#include <stdexcept>
#include <string>

namespace superpos {

/// Input violates a documented precondition (bad dimensions, invalid state, unknown name).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical routine could not produce a usable result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace superpos
