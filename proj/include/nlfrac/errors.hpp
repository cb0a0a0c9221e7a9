#pragma once

#include <stdexcept>
#include <string>

namespace nlfrac {

/// Raised when a numerical procedure cannot deliver a trustworthy value
/// (non-convergent quadrature, NaN in a time step, unstable grid).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by probes whose mathematical hypotheses are not met by the data.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nlfrac
