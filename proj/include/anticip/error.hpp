#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anticip {

// An index or parameter outside the admitted range of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Alternating model states with an odd number of classes or cells collapse
// into an evolution with half the step size.
class DegenerateModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A measure whose reduction modulo 2*pi is not uniform on the p-th roots of
// unity. Carries the residue class with the largest deviation.
class ConstraintViolation : public std::runtime_error {
 public:
  ConstraintViolation(const std::string& what, std::size_t worst_residue, double deviation)
      : std::runtime_error(what), worst_residue_(worst_residue), deviation_(deviation) {}

  std::size_t worst_residue() const noexcept { return worst_residue_; }
  double deviation() const noexcept { return deviation_; }

 private:
  std::size_t worst_residue_;
  double deviation_;
};

}  // namespace anticip
