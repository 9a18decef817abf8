#pragma once

#include <stdexcept>
#include <string>

namespace egk {

// Bad arguments: out of range, wrong dimension, forbidden branch.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Quadrature or iteration failed to reach tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested size exceeds what the exact routes are sized for.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace egk
