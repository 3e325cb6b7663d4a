#pragma once

#include <utility>

#include "specfact/riccati.hpp"

namespace specfact {

// Selects which singularities a flip KEEPS: the listed zero blocks (of the
// canonical Gamma^T structure) and pole blocks (of the A structure) stay
// where they are; every unlisted block is reflected through the unit circle.
// The kept blocks span ker P and ker Q respectively; empty lists flip
// everything, full lists reproduce the reference factor.
struct FlipSpec {
  std::vector<int> zero_blocks;
  std::vector<int> pole_blocks;
};

// The matrices of a pole flip by Q, kept together because the combined flip
// reuses all of them.
struct PoleFlipMatrices {
  Matrix delta;  // I + B^T Q B, symmetric positive definite
  Matrix a_q;    // A - B Delta^{-1} B^T Q A
  Matrix b_q;    // B Delta^{-1/2} U
  Matrix c_q;    // C - D Delta^{-1} B^T Q A
  Matrix d_q;    // symmetric PD normalization of D Delta^{-1/2}
  Matrix u;      // orthogonal polar factor making d_q symmetric
};

PoleFlipMatrices pole_flip_matrices(const ReferenceFamily& ref,
                                    const Matrix& q);

// Zero flip: W_P = (A, (BD^T + APC^T)(DD^T + CPC^T)^{-1/2}, C,
// (DD^T + CPC^T)^{1/2}).  Poles stay, zeros in ker P stay, the rest reflect.
StateSpaceModel flip_zeros(const ReferenceFamily& ref,
                           const RiccatiSolution& p);

// Pole flip: W_Q from PoleFlipMatrices.  Zeros stay (the numerator matrix of
// the result equals Gamma), poles in ker Q stay, the rest reflect.
StateSpaceModel flip_poles(const ReferenceFamily& ref,
                           const RiccatiSolution& q);

// Intermediate products of a combined flip, exposed so reports can quote the
// individual Riccati residuals.
struct FlipComputation {
  RiccatiSolution p;
  RiccatiSolution q;
  RiccatiSolution p_q;
  PoleFlipMatrices pole;
  StateSpaceModel model;
};

// Combined flip in closed form: pole flip by Q, then zero flip of W_Q by the
// combined solution P_Q — without ever re-validating W_Q as a reference.
FlipComputation flip_both_detail(const ReferenceFamily& ref,
                                 const FlipSpec& spec);
StateSpaceModel flip_both(const ReferenceFamily& ref, const FlipSpec& spec);

// The same factor through the opposite composition order (zero flip first,
// then a pole flip of the re-validated W_P).  Used to cross-check that the
// flip diagram commutes.
StateSpaceModel flip_both_dual(const ReferenceFamily& ref,
                               const FlipSpec& spec);

// Flip every zero and every pole (empty FlipSpec).
StateSpaceModel total_flip(const ReferenceFamily& ref);

// All 2^(#zero blocks) * 2^(#pole blocks) minimal square factors, in
// subset-mask order (zero selection outer, pole selection inner).  Each
// factor is validated against the reference spectrum before it is returned.
std::vector<std::pair<FlipSpec, StateSpaceModel>> enumerate_factors(
    const ReferenceFamily& ref);

}  // namespace specfact
