#pragma once

#include <stdexcept>
#include <string>

namespace condlight {

/// Raised when an iterative or truncated computation cannot meet its
/// accuracy contract within the configured limits.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace condlight
