#include "dmlab/error.hpp"

namespace dmlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::Undecidable: return "Undecidable";
    case ErrorCode::DivergentSeries: return "DivergentSeries";
    case ErrorCode::SeriesConverges: return "SeriesConverges";
    case ErrorCode::NotInEllT: return "NotInEllT";
    case ErrorCode::DepthLimit: return "DepthLimit";
    case ErrorCode::EmptyRemainder: return "EmptyRemainder";
    case ErrorCode::FailsThickness: return "FailsThickness";
    case ErrorCode::ResolutionExhausted: return "ResolutionExhausted";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::Misaligned: return "Misaligned";
    case ErrorCode::ZeroMassBall: return "ZeroMassBall";
    case ErrorCode::NotUniformlyPerfect: return "NotUniformlyPerfect";
    case ErrorCode::NoValidatedExponent: return "NoValidatedExponent";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::GapTooSmall: return "GapTooSmall";
    case ErrorCode::ExponentWindowEmpty: return "ExponentWindowEmpty";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::ProgressGuard: return "ProgressGuard";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace dmlab
