#pragma once

#include <stdexcept>

namespace fk {

/// A numerical step failed (eigensolver, linear solve, non-finite result).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fk
