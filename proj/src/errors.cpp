#include "specfact/errors.hpp"

#include <ostream>

namespace specfact {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::AsymmetricD: return "AsymmetricD";
    case ErrorCode::NotPDD: return "NotPDD";
    case ErrorCode::SingularD: return "SingularD";
    case ErrorCode::SingularGamma: return "SingularGamma";
    case ErrorCode::MixedA: return "MixedA";
    case ErrorCode::MixedGamma: return "MixedGamma";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotUnmixed: return "NotUnmixed";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::RepeatedEigenvalues: return "RepeatedEigenvalues";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::SingularA: return "SingularA";
    case ErrorCode::SingularAnchor: return "SingularAnchor";
    case ErrorCode::InvarianceViolation: return "InvarianceViolation";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::InnerSingular: return "InnerSingular";
    case ErrorCode::DeltaNotPD: return "DeltaNotPD";
    case ErrorCode::PolarFailure: return "PolarFailure";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
  }
  return "UnknownError";
}

std::ostream& operator<<(std::ostream& os, ErrorCode code) {
  return os << to_string(code);
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace specfact
