#include "ngev/errors.hpp"

namespace ngev {

const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::structural: return "structural";
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::unreachable: return "unreachable";
    case ErrorCategory::divergence: return "divergence";
    case ErrorCategory::infeasible: return "infeasible";
    case ErrorCategory::stall: return "stall";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

}  // namespace ngev
