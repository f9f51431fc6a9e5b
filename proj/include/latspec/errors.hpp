#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latspec {

// Input that cannot be interpreted: bad fractions, malformed lattice files,
// dimension mismatches.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured desk-scale limit (enumeration size, SVP dimension, search
// size) would be exceeded. Not a failure of the mathematics.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed. Never expected; signals a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The basis rows do not generate a lattice containing Z^d.
class NotIntegrationLattice : public std::invalid_argument {
 public:
  NotIntegrationLattice(std::size_t unit_index, const std::string& what)
      : std::invalid_argument(what), unit_index_(unit_index) {}

  // Index i of the first unit vector e_i that is not in the lattice.
  std::size_t unit_index() const noexcept { return unit_index_; }

 private:
  std::size_t unit_index_;
};

}  // namespace latspec
