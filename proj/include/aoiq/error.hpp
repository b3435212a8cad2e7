#pragma once

#include <stdexcept>
#include <string>

namespace aoiq {

enum class ErrorCode {
  InvalidInput,
  Stability,
  Domain,
  Pole,
  DegenerateModel,
  Unsupported,
  InconsistentInputs,
  Accuracy,
  Divergence,
  NonConvergence,
  InsufficientData,
};

// Two coarse families, mirrored by the CLI exit codes and the C API statuses:
// bad parameters -> 2, accuracy/divergence failures -> 3.
enum class ErrorCategory { InvalidInput = 2, Accuracy = 3 };

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  ErrorCategory category() const noexcept {
    switch (code_) {
      case ErrorCode::Accuracy:
      case ErrorCode::Divergence:
      case ErrorCode::NonConvergence:
      case ErrorCode::InsufficientData:
        return ErrorCategory::Accuracy;
      default:
        return ErrorCategory::InvalidInput;
    }
  }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace aoiq
