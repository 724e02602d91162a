#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dmlab {

enum class ErrorCode {
  InvalidParameter,
  IndexOutOfRange,
  Undecidable,
  DivergentSeries,
  SeriesConverges,
  NotInEllT,
  DepthLimit,
  EmptyRemainder,
  FailsThickness,
  ResolutionExhausted,
  InvalidNode,
  Misaligned,
  ZeroMassBall,
  NotUniformlyPerfect,
  NoValidatedExponent,
  TailTooLarge,
  PreconditionViolated,
  GapTooSmall,
  ExponentWindowEmpty,
  LengthMismatch,
  NonMonotone,
  ProgressGuard,
  Parse,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception; the code is the
// machine-readable part, the message carries context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace dmlab
