#pragma once

#include <stdexcept>
#include <string>

namespace bpb {

enum class ErrorKind {
  DimensionMismatch,
  ZeroVector,
  NonSmoothExponent,
  NonUnitPoint,
  DegenerateBasis,
  OutOfRange,
  ZeroOperator,
  NotNormOne,
  NotMaximizer,
  InvalidConfig,
  RejectionBudget,
};

const char* to_string(ErrorKind kind);

/// Typed failure raised by every precondition check in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bpb
