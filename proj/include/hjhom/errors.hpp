#pragma once

#include <stdexcept>
#include <string>

namespace hjhom {

// Thrown when an operation refuses to run because its stated preconditions
// (resolution, CFL, argument ranges) are not met.  The CLI maps this to
// exit code 2; genuine runtime failures map to exit code 1.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace hjhom
