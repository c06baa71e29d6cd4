#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cheeger {

enum class ErrorCode {
  InvalidInput,
  NotStochastic,
  NotIrreducible,
  NegativeEntry,
  StationarySolveFailed,
  NoPositiveEntry,
  TooManyStates,
  NotReversible,
  NotLazy,
  EigensolveFailed,
  ZeroDenominator,
  PreconditionViolated,
  InconsistentParams,
  ConcavityRequired,
  NoFeasibleB,
  InvalidSpec,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::StationarySolveFailed: return "StationarySolveFailed";
    case ErrorCode::NoPositiveEntry: return "NoPositiveEntry";
    case ErrorCode::TooManyStates: return "TooManyStates";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::NotLazy: return "NotLazy";
    case ErrorCode::EigensolveFailed: return "EigensolveFailed";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InconsistentParams: return "InconsistentParams";
    case ErrorCode::ConcavityRequired: return "ConcavityRequired";
    case ErrorCode::NoFeasibleB: return "NoFeasibleB";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps codes onto process exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cheeger
