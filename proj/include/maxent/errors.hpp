#pragma once

#include <stdexcept>

namespace maxent {

// Failure of a numerical procedure on well-formed input (non-convergence,
// indefinite matrix beyond tolerance, ...). Distinct from precondition
// violations, which throw std::invalid_argument; the CLI maps the two to
// different exit codes.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maxent
