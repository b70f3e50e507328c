#pragma once

#include <stdexcept>
#include <string>

namespace bsrd {

/// Error categories double as the machine-readable tag printed by the CLI
/// (`ERROR:<category>:`) and decide the process exit code.
enum class ErrorCategory { validation, parse, domain, geometry, blowup, fit, io, verification };

const char* category_name(ErrorCategory c);

/// 1 for bad input, 2 for runtime failures, 3 for failed verification.
int exit_code_for(ErrorCategory c);

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

#define BSRD_DEFINE_ERROR(Name, cat)                                                     \
  class Name : public Error {                                                            \
  public:                                                                                \
    explicit Name(const std::string& what) : Error(ErrorCategory::cat, what) {}          \
  };

BSRD_DEFINE_ERROR(ValidationError, validation)
BSRD_DEFINE_ERROR(ParseError, parse)
BSRD_DEFINE_ERROR(DomainError, domain)
BSRD_DEFINE_ERROR(GeometryError, geometry)
BSRD_DEFINE_ERROR(BlowUpError, blowup)
BSRD_DEFINE_ERROR(FitError, fit)
BSRD_DEFINE_ERROR(IoError, io)
BSRD_DEFINE_ERROR(VerificationError, verification)

#undef BSRD_DEFINE_ERROR

}  // namespace bsrd
