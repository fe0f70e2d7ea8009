#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expramsey {

enum class ErrorKind {
  Parse,
  InvalidArgument,
  SymbolicUnsupported,
  UncertifiableLogStar,
  UncertifiableComparison,
  FactorizationBudgetExceeded,
  UnsupportedShape,
  ExactnessRequired,
  WeightUndefined,
  BudgetExceeded,
  ArityMismatch,
  SequenceNotSufficientlyLacunary,
  OutOfDomain,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so front ends can map
/// it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace expramsey
