#pragma once

#include <stdexcept>
#include <string>

namespace convbody {

// Intersection K ∩ (t+L) has no points.
class EmptyBodyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver could not certify the requested tolerance.
// Carries the best value found and the gap it could certify.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double best_value, double gap)
      : std::runtime_error(what), best_value_(best_value), gap_(gap) {}
  double best_value() const noexcept { return best_value_; }
  double certified_gap() const noexcept { return gap_; }

 private:
  double best_value_;
  double gap_;
};

// Bracketing or sign-structure failure in root finding, or an internal
// solver state that should be impossible for valid inputs.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace convbody
