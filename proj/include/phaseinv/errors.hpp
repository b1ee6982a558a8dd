#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace phaseinv {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a state lies inside the collision neighbourhood X_eps^c.
/// Carries the (1-based) offending oscillator pair.
class SingularState : public std::runtime_error {
 public:
  SingularState(const std::string& what, int i, int j)
      : std::runtime_error(what), pair_(i, j) {}

  std::pair<int, int> pair() const noexcept { return pair_; }

 private:
  std::pair<int, int> pair_;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRange : public std::range_error {
 public:
  using std::range_error::range_error;
};

class BranchPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phaseinv
