#pragma once

#include "specfact/realization.hpp"

namespace specfact {

enum class RiccatiKind { ZeroFlip, PoleFlip, Combined };

// A symmetric solution of one of the homogeneous Riccati equations, tagged
// with the invariant subspace its kernel is required to span and the
// residual of the defining equation.
struct RiccatiSolution {
  RiccatiKind kind = RiccatiKind::ZeroFlip;
  Matrix matrix;
  InvariantSubspace kernel;
  double residual = 0.0;
};

// Anchor Stein solutions, computable without a ReferenceFamily.
Matrix p_plus_inverse(const Matrix& gamma, const Matrix& c, const Matrix& d);
Matrix q_plus_inverse(const Matrix& a, const Matrix& b);

// Residual norms of the two homogeneous Riccati equations:
//   P = Gamma P Gamma^T - Gamma P C^T (D D^T + C P C^T)^{-1} C P Gamma^T
//   Q = A^T Q A - A^T Q B (I + B^T Q B)^{-1} B^T Q A
// The inner matrices must be invertible (InnerSingular / DeltaNotPD).
double riccati_residual_p(const Matrix& p, const Matrix& gamma,
                          const Matrix& c, const Matrix& d);
double riccati_residual_q(const Matrix& q, const Matrix& a, const Matrix& b);

// Solution of the zero-flip equation whose kernel is the given
// Gamma^T-invariant subspace S: P = [(I - Pi_S) P_plus^{-1} (I - Pi_S)]^+.
RiccatiSolution solve_p(const ReferenceFamily& ref,
                        const InvariantSubspace& s);

// Solution of the pole-flip equation whose kernel is the given A-invariant
// subspace Y (dual construction from Q_plus^{-1}; Y = full space gives 0).
RiccatiSolution solve_q(const ReferenceFamily& ref,
                        const InvariantSubspace& y);

// Solution of the zero-flip equation for the pole-flipped factor W_Q, by the
// closed combination formula P_Q = [P P^+ Q P P^+ + P^+]^+.  Validated
// against the W_Q-side equation residual and the expected kernel.
RiccatiSolution combine_pq(const ReferenceFamily& ref,
                           const RiccatiSolution& p,
                           const RiccatiSolution& q);

// Same quantity computed without the combination formula: build W_Q
// explicitly, validate it as a reference factor, and solve its own zero-flip
// equation on the matching invariant subspace.  Serves as the independent
// cross-check for combine_pq.
RiccatiSolution solve_pq_direct(const ReferenceFamily& ref,
                                const RiccatiSolution& q,
                                const InvariantSubspace& s);

// All solutions, one per invariant subspace, in subset-mask order.
std::vector<RiccatiSolution> enumerate_p(const ReferenceFamily& ref);
std::vector<RiccatiSolution> enumerate_q(const ReferenceFamily& ref);

}  // namespace specfact
