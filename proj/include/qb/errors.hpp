#pragma once

#include <stdexcept>
#include <string>

namespace qb {

/// A hypothesis of a mathematical operation does not hold (wrong class,
/// violated guard, zero coefficient, ...).
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The working p-adic precision is not enough to certify an answer, or a
/// bounded search ended without a decision.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qb
