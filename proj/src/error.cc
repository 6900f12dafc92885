#include "wcetw/error.h"

namespace wcetw {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kMissingVariable: return "MissingVariable";
    case ErrorKind::kUnknownObject: return "UnknownObject";
    case ErrorKind::kUnknownSymbol: return "UnknownSymbol";
    case ErrorKind::kNotUnknown: return "NotUnknown";
    case ErrorKind::kNotMulti: return "NotMulti";
    case ErrorKind::kUnboundVariable: return "UnboundVariable";
    case ErrorKind::kIllFormedPlan: return "IllFormedPlan";
    case ErrorKind::kStructure: return "StructureError";
    case ErrorKind::kTraceGap: return "TraceGap";
    case ErrorKind::kUnknownConstraintKind: return "UnknownConstraintKind";
    case ErrorKind::kInfeasibleFlow: return "InfeasibleFlow";
    case ErrorKind::kVariableClash: return "VariableClash";
    case ErrorKind::kNonterminatingScope: return "NonterminatingScope";
    case ErrorKind::kResourceExceeded: return "ResourceExceeded";
    case ErrorKind::kSymbolMismatch: return "SymbolMismatch";
    case ErrorKind::kExhausted: return "Exhausted";
    case ErrorKind::kUnbounded: return "Unbounded";
  }
  return "Error";
}

}  // namespace wcetw
