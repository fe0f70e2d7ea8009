#include "expramsey/error.hpp"

namespace expramsey {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SymbolicUnsupported: return "SymbolicUnsupported";
    case ErrorKind::UncertifiableLogStar: return "UncertifiableLogStar";
    case ErrorKind::UncertifiableComparison: return "UncertifiableComparison";
    case ErrorKind::FactorizationBudgetExceeded: return "FactorizationBudgetExceeded";
    case ErrorKind::UnsupportedShape: return "UnsupportedShape";
    case ErrorKind::ExactnessRequired: return "ExactnessRequired";
    case ErrorKind::WeightUndefined: return "WeightUndefined";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SequenceNotSufficientlyLacunary: return "SequenceNotSufficientlyLacunary";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
  }
  return "Unknown";
}

}  // namespace expramsey
