#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace specfact {

// One code per contract violation so callers can dispatch without matching
// message strings.  Codes are grouped by the stage that raises them.
enum class ErrorCode {
  // input / parsing / filesystem
  ParseError,
  DimensionMismatch,
  NonFinite,
  IoError,

  // admissibility of a reference model
  AsymmetricD,
  NotPDD,
  SingularD,
  SingularGamma,
  MixedA,
  MixedGamma,
  NotMinimal,

  // numerical kernel
  NotSymmetric,
  NotOrthonormal,
  NotPositiveDefinite,
  NotUnmixed,
  EigenFailure,

  // spectral structure / enumeration
  RepeatedEigenvalues,
  EnumerationTooLarge,

  // Riccati machinery
  SingularA,
  SingularAnchor,
  InvarianceViolation,
  ResidualTooLarge,
  InnerSingular,

  // factor construction
  DeltaNotPD,
  PolarFailure,

  // evaluation / generation / verification
  PoleHit,
  GenerationFailure,
  VerificationFailure,
};

const char* to_string(ErrorCode code);
std::ostream& operator<<(std::ostream& os, ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error{code, message}; spelled as a function so call sites stay short.
[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace specfact
