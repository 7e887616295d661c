#pragma once

#include <stdexcept>
#include <string>

namespace chspec {

/// Raised for malformed input: bad configuration, inconsistent grids, wrong sizes.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot produce a meaningful number
/// (overflow, vanishing normalisation, lost root branch, Jordan points).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chspec
