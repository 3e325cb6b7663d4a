#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "specfact/errors.hpp"
#include "specfact/tolerances.hpp"

namespace specfact {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Throws NonFinite if any entry of m is NaN or infinite.
void require_finite(const Matrix& m, const char* name);

// Throws NotSymmetric unless ||m - m^T|| <= tol::kSymmetry * (1 + ||m||).
void require_symmetric(const Matrix& m, const char* name);

Matrix symmetrize(const Matrix& m);

// Positive-definiteness floor for a symmetric matrix, scaled to its trace.
double pd_floor(const Matrix& m);

// Moore-Penrose pseudoinverse.  Singular values <= rtol * sigma_max count as
// zero.  The result of a symmetric input is symmetrized.
Matrix pinv(const Matrix& m, double rtol = tol::kRankRtol);

int numerical_rank(const Matrix& m, double rtol = tol::kRankRtol);

// Orthonormal basis of the numerical kernel, as an n x (n - rank) matrix.
Matrix kernel_basis(const Matrix& m, double rtol = tol::kRankRtol);

// Symmetric positive definite square root.  Throws NotPositiveDefinite if any
// eigenvalue falls below the trace-scaled floor.
Matrix sqrtm_spd(const Matrix& m);

// Inverse of sqrtm_spd(m), from the same eigendecomposition.
Matrix inv_sqrtm_spd(const Matrix& m);

// Projector V V^T onto the column span of an orthonormal-column matrix.
// Throws NotOrthonormal unless V^T V = I within tolerance.
Matrix orth_projector(const Matrix& basis);

// Eigenvalues in canonical order: ascending real part, then ascending |imag|,
// then imag (so a conjugate pair lists the negative member first).
std::vector<Complex> eigenvalues_of(const Matrix& m);

// True iff no eigenvalue product lambda_i * lambda_j (including i == j) lies
// within tol of 1.
bool is_unmixed(const Matrix& m, double tol = tol::kUnmixed);

// True iff all pairwise gaps exceed tol * (1 + max modulus).
bool distinct_eigenvalues(const std::vector<Complex>& eigs,
                          double tol = tol::kDistinct);

// Unique symmetric X with X - F^T X F = G.  Requires F unmixed and G
// symmetric; cost is one real Schur decomposition plus O(n^3) substitution.
Matrix solve_stein(const Matrix& f, const Matrix& g);

// Kronecker product, intended for the small blocks of Schur substitutions.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace specfact
