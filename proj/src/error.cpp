#include "bsrd/error.hpp"

namespace bsrd {

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::geometry: return "geometry";
    case ErrorCategory::blowup: return "blowup";
    case ErrorCategory::fit: return "fit";
    case ErrorCategory::io: return "io";
    case ErrorCategory::verification: return "verification";
  }
  return "unknown";
}

int exit_code_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::validation:
    case ErrorCategory::parse:
    case ErrorCategory::domain:
      return 1;
    case ErrorCategory::verification:
      return 3;
    default:
      return 2;
  }
}

}  // namespace bsrd
