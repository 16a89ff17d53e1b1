#pragma once

#include <stdexcept>
#include <string>

namespace ngev {

/// Machine-readable failure categories, also used as CLI exit codes.
enum class ErrorCategory {
  config = 2,       // bad option value or inconsistent configuration
  parse = 3,        // malformed input text
  structural = 4,   // graph references unknown nodes, duplicate links, ...
  validation = 5,   // value out of admissible range
  unreachable = 6,  // demand toward a destination no path can serve
  divergence = 7,   // fixed-point iteration failed to converge
  infeasible = 8,   // an oracle or search exceeded its enumeration budget
  stall = 9,        // step-size search collapsed below the floor
  io = 10,          // file system failure
};

const char* to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

}  // namespace ngev
