#pragma once

#include <cstdint>
#include <optional>

#include "specfact/schur.hpp"

namespace specfact {

// State-space quadruple realizing W(z) = C (zI - A)^{-1} B + D, with square
// W (as many inputs as outputs).
struct StateSpaceModel {
  Matrix A;  // n x n
  Matrix B;  // n x m
  Matrix C;  // m x n
  Matrix D;  // m x m

  int state_dim() const { return static_cast<int>(A.rows()); }
  int output_dim() const { return static_cast<int>(D.rows()); }
};

// Throws DimensionMismatch / NonFinite on malformed quadruples.
void validate_dimensions(const StateSpaceModel& m);

// Numerator matrix A - B D^{-1} C; its eigenvalues are the transmission
// zeros.  Throws SingularD.
Matrix numerator_matrix(const StateSpaceModel& m);

// W(z).  Throws PoleHit when zI - A is numerically singular.
ComplexMatrix eval_tf(const StateSpaceModel& m, Complex z);

// Spectral density on the unit circle: Phi(e^{i theta}) =
// W(e^{i theta}) W(e^{i theta})^*; Hermitian by construction.
ComplexMatrix eval_spectrum(const StateSpaceModel& m, double theta);

// Eigenvalues of A / of the numerator matrix, in canonical order.
std::vector<Complex> poles(const StateSpaceModel& m);
std::vector<Complex> zeros(const StateSpaceModel& m);

// Controllability and observability rank tests at the shared rank cutoff.
bool check_minimal(const StateSpaceModel& m, double rtol = tol::kRankRtol);

// An admissible reference factor with the cached structure every flip needs:
// the numerator matrix, the two anchor Stein solutions, and canonically
// ordered Schur forms of Gamma^T (zero side) and A (pole side).
class ReferenceFamily {
 public:
  // Full admissibility check; throws the first violated condition
  // (AsymmetricD, NotPDD, SingularGamma, MixedA, MixedGamma, NotMinimal).
  static ReferenceFamily validate(StateSpaceModel model);

  const StateSpaceModel& model() const { return model_; }
  const Matrix& gamma() const { return gamma_; }

  // Anchor solution P_plus^{-1} of X - Gamma^T X Gamma + C^T (DD^T)^{-1} C = 0.
  const Matrix& p_plus_inverse() const { return p_plus_inverse_; }

  // Anchor solution Q_plus^{-1} of X - A X A^T + B B^T = 0 ... defined only
  // when A is nonsingular.
  bool has_q_plus_inverse() const { return q_plus_inverse_.has_value(); }
  const Matrix& q_plus_inverse() const;  // throws SingularA when absent

  const SchurStructure& zero_structure() const { return zero_structure_; }
  const SchurStructure& pole_structure() const { return pole_structure_; }

 private:
  ReferenceFamily(StateSpaceModel model, Matrix gamma, Matrix p_plus_inverse,
                  std::optional<Matrix> q_plus_inverse,
                  SchurStructure zero_structure, SchurStructure pole_structure);

  StateSpaceModel model_;
  Matrix gamma_;
  Matrix p_plus_inverse_;
  std::optional<Matrix> q_plus_inverse_;
  SchurStructure zero_structure_;
  SchurStructure pole_structure_;
};

// Free-function alias for ReferenceFamily::validate.
ReferenceFamily check_admissible(StateSpaceModel model);

// Deterministic random admissible model: A with distinct eigenvalues of
// modulus in [0.2, 0.8], Gaussian B and C, D = I + small SPD perturbation.
// Rejection-samples until the admissibility margins hold; throws
// GenerationFailure after too many attempts.
StateSpaceModel random_admissible(int n, int m, std::uint64_t seed);

}  // namespace specfact
