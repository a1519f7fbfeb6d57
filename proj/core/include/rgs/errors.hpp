#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rgs {

// Caller broke a documented precondition (dimension mismatch, zero column, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative factorization ran out of sweeps.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity is mathematically undefined on this instance, e.g. a normalized
// error direction after a step that zeroed the error.
class DegenerateInstance : public std::domain_error {
 public:
  DegenerateInstance(const std::string& what, std::size_t index)
      : std::domain_error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace rgs
