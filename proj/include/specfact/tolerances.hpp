#pragma once

namespace specfact::tol {

// Single relative cutoff for every rank / kernel decision (singular values
// below kRankRtol * sigma_max are treated as zero).
inline constexpr double kRankRtol = 1e-10;

// Equation residuals are accepted when <= kResidualRtol * (1 + norm scale).
inline constexpr double kResidualRtol = 1e-8;

// Invariant-subspace deviation ||(I - VV^T) M V|| <= kInvariance * (1 + ||M||).
inline constexpr double kInvariance = 1e-10;

// Positive-definiteness floor, scaled by 1 + |trace|/n.
inline constexpr double kPdRtol = 1e-10;

// Symmetry deviation ||M - M^T|| <= kSymmetry * (1 + ||M||).
inline constexpr double kSymmetry = 1e-8;

// An eigenvalue product with |lambda_i * lambda_j - 1| <= kUnmixed marks a
// mixed spectrum.
inline constexpr double kUnmixed = 1e-8;

// Pairwise eigenvalue distinctness gate for enumeration, semi-relative.
inline constexpr double kDistinct = 1e-8;

// Eigenvalue multiset comparisons, semi-relative per matched pair.
inline constexpr double kEigMatch = 1e-8;

// Largest principal-angle sine allowed between a requested kernel and the
// numerical kernel of a computed solution.
inline constexpr double kKernelGap = 1e-8;

// Spectral / transfer-function deviation budget over unit-circle samples.
inline constexpr double kSpectral = 1e-7;

// Default number of unit-circle samples for spectral comparisons.
inline constexpr int kSamples = 64;

// A sample angle closer than kPoleDodge to a pole phase is shifted by
// kPoleShift before evaluation.
inline constexpr double kPoleDodge = 1e-6;
inline constexpr double kPoleShift = 1e-3;

}  // namespace specfact::tol
