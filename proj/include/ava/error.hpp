#ifndef AVA_ERROR_HPP
#define AVA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ava {

enum class ErrorCode {
  InvalidInstance,
  UnknownEdge,
  InfeasiblePrefix,
  InvalidBundling,
  AmbiguousInstance,
  MissingBudgets,
  GammaViolated,
  DomainError,
  NumericalFailure,
  InfeasibleFractional,
  StreamModelMismatch,
  PhaseViolation,
  TooLarge,
  NotMaximal,
  Infeasible,
  BadParameter,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for the library; `code()` drives CLI exit codes and tests.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ava

#endif  // AVA_ERROR_HPP
