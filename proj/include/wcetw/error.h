#pragma once

#include <stdexcept>
#include <string>

namespace wcetw {

enum class ErrorKind {
  kParse,
  kValidation,
  kMissingVariable,
  kUnknownObject,
  kUnknownSymbol,
  kNotUnknown,
  kNotMulti,
  kUnboundVariable,
  kIllFormedPlan,
  kStructure,
  kTraceGap,
  kUnknownConstraintKind,
  kInfeasibleFlow,
  kVariableClash,
  kNonterminatingScope,
  kResourceExceeded,
  kSymbolMismatch,
  kExhausted,
  kUnbounded,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wcetw
