#include "specfact/riccati.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "specfact/factor_flip.hpp"

namespace specfact {

namespace {

// Pseudoinverse and range projector of a symmetric matrix from one SVD.
void pinv_and_range(const Matrix& m, double rtol, Matrix& pseudo,
                    Matrix& projector) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = sigma.size() == 0 ? 0.0 : rtol * sigma(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  Vector inv_sigma = Vector::Zero(sigma.size());
  for (int i = 0; i < rank; ++i) inv_sigma(i) = 1.0 / sigma(i);
  pseudo = symmetrize(svd.matrixV() * inv_sigma.asDiagonal() *
                      svd.matrixU().transpose());
  const Matrix range = svd.matrixU().leftCols(rank);
  projector = symmetrize(range * range.transpose());
}

// Shared kernel-targeted solve: X = [(I - Pi) anchor (I - Pi)]^+, whose
// kernel must come out as span(basis).
Matrix kernel_targeted_solution(const Matrix& anchor, const Matrix& basis) {
  const Eigen::Index n = anchor.rows();
  const Matrix complement =
      Matrix::Identity(n, n) - orth_projector(basis);
  return symmetrize(pinv(symmetrize(complement * anchor * complement)));
}

void require_kernel_match(const Matrix& solution, const Matrix& expected,
                          const char* label) {
  const Matrix actual = kernel_basis(solution);
  if (actual.cols() != expected.cols() ||
      subspace_gap(expected, actual) > tol::kKernelGap) {
    std::ostringstream oss;
    oss << label << " kernel has dimension " << actual.cols()
        << " and misses the requested subspace (dimension "
        << expected.cols() << ")";
    fail(ErrorCode::ResidualTooLarge, oss.str());
  }
}

void require_residual(double residual, const Matrix& solution,
                      const char* label) {
  if (residual > tol::kResidualRtol * (1.0 + solution.norm())) {
    std::ostringstream oss;
    oss << label << " residual " << residual << " exceeds tolerance";
    fail(ErrorCode::ResidualTooLarge, oss.str());
  }
}

}  // namespace

Matrix p_plus_inverse(const Matrix& gamma, const Matrix& c, const Matrix& d) {
  const Matrix ddt = symmetrize(d * d.transpose());
  Eigen::LLT<Matrix> llt(ddt);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::NotPositiveDefinite,
         "D D^T is not positive definite in the zero-side anchor");
  }
  return solve_stein(gamma,
                     symmetrize(-c.transpose() * llt.solve(c)));
}

Matrix q_plus_inverse(const Matrix& a, const Matrix& b) {
  if (numerical_rank(a) < a.rows()) {
    fail(ErrorCode::SingularA,
         "A is singular; the pole-side anchor solution is undefined");
  }
  return solve_stein(a.transpose(), symmetrize(-b * b.transpose()));
}

double riccati_residual_p(const Matrix& p, const Matrix& gamma,
                          const Matrix& c, const Matrix& d) {
  const Matrix inner = symmetrize(d * d.transpose() + c * p * c.transpose());
  Eigen::FullPivLU<Matrix> lu(inner);
  lu.setThreshold(tol::kRankRtol);
  if (!lu.isInvertible()) {
    fail(ErrorCode::InnerSingular,
         "D D^T + C P C^T is numerically singular");
  }
  const Matrix gpc = gamma * p * c.transpose();
  return (p - gamma * p * gamma.transpose() +
          gpc * lu.solve(gpc.transpose()))
      .norm();
}

double riccati_residual_q(const Matrix& q, const Matrix& a, const Matrix& b) {
  const Eigen::Index m = b.cols();
  const Matrix delta =
      symmetrize(Matrix::Identity(m, m) + b.transpose() * q * b);
  Eigen::FullPivLU<Matrix> lu(delta);
  lu.setThreshold(tol::kRankRtol);
  if (!lu.isInvertible()) {
    fail(ErrorCode::InnerSingular, "I + B^T Q B is numerically singular");
  }
  const Matrix aqb = a.transpose() * q * b;
  return (q - a.transpose() * q * a + aqb * lu.solve(aqb.transpose())).norm();
}

RiccatiSolution solve_p(const ReferenceFamily& ref,
                        const InvariantSubspace& s) {
  require_invariant(ref.gamma().transpose(), s.basis);

  RiccatiSolution sol;
  sol.kind = RiccatiKind::ZeroFlip;
  sol.kernel = s;
  sol.matrix = kernel_targeted_solution(ref.p_plus_inverse(), s.basis);
  sol.residual = riccati_residual_p(sol.matrix, ref.gamma(), ref.model().C,
                                    ref.model().D);
  require_residual(sol.residual, sol.matrix, "zero-flip solution");
  require_kernel_match(sol.matrix, s.basis, "zero-flip solution");
  return sol;
}

RiccatiSolution solve_q(const ReferenceFamily& ref,
                        const InvariantSubspace& y) {
  const StateSpaceModel& model = ref.model();
  require_invariant(model.A, y.basis);

  RiccatiSolution sol;
  sol.kind = RiccatiKind::PoleFlip;
  sol.kernel = y;

  const Eigen::Index n = model.A.rows();
  if (y.basis.cols() == n) {
    // Keeping every pole needs no anchor (and tolerates singular A).
    sol.matrix = Matrix::Zero(n, n);
    sol.residual = 0.0;
    return sol;
  }

  sol.matrix = kernel_targeted_solution(ref.q_plus_inverse(), y.basis);

  const Eigen::Index m = model.B.cols();
  const Matrix delta = symmetrize(Matrix::Identity(m, m) +
                                  model.B.transpose() * sol.matrix * model.B);
  Eigen::SelfAdjointEigenSolver<Matrix> es(delta);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::EigenFailure, "eigendecomposition of I + B^T Q B failed");
  }
  if (es.eigenvalues().minCoeff() < pd_floor(delta)) {
    std::ostringstream oss;
    oss << "I + B^T Q B is not positive definite (min eigenvalue "
        << es.eigenvalues().minCoeff() << "); Q is not a flip solution";
    fail(ErrorCode::DeltaNotPD, oss.str());
  }

  sol.residual = riccati_residual_q(sol.matrix, model.A, model.B);
  require_residual(sol.residual, sol.matrix, "pole-flip solution");
  require_kernel_match(sol.matrix, y.basis, "pole-flip solution");
  return sol;
}

RiccatiSolution combine_pq(const ReferenceFamily& ref,
                           const RiccatiSolution& p,
                           const RiccatiSolution& q) {
  Matrix p_pseudo;
  Matrix p_range;
  pinv_and_range(p.matrix, tol::kRankRtol, p_pseudo, p_range);

  RiccatiSolution sol;
  sol.kind = RiccatiKind::Combined;
  sol.kernel = p.kernel;
  sol.matrix = symmetrize(
      pinv(symmetrize(p_range * q.matrix * p_range + p_pseudo)));

  // The combined matrix must solve the zero-flip equation of the
  // pole-flipped factor, whose numerator matrix is again Gamma.
  const PoleFlipMatrices pole = pole_flip_matrices(ref, q.matrix);
  sol.residual =
      riccati_residual_p(sol.matrix, ref.gamma(), pole.c_q, pole.d_q);
  require_residual(sol.residual, sol.matrix, "combined solution");
  require_kernel_match(sol.matrix, p.kernel.basis, "combined solution");
  return sol;
}

RiccatiSolution solve_pq_direct(const ReferenceFamily& ref,
                                const RiccatiSolution& q,
                                const InvariantSubspace& s) {
  const ReferenceFamily flipped = check_admissible(flip_poles(ref, q));

  const std::vector<int> map =
      match_blocks(ref.zero_structure(), flipped.zero_structure());
  std::vector<int> mapped_ids;
  mapped_ids.reserve(s.block_ids.size());
  for (int id : s.block_ids) mapped_ids.push_back(map.at(id));
  std::sort(mapped_ids.begin(), mapped_ids.end());

  RiccatiSolution sol = solve_p(
      flipped, invariant_subspace(flipped.zero_structure(), mapped_ids));
  sol.kind = RiccatiKind::Combined;
  return sol;
}

std::vector<RiccatiSolution> enumerate_p(const ReferenceFamily& ref) {
  std::vector<RiccatiSolution> solutions;
  for (auto& s : enumerate_subspaces(ref.zero_structure())) {
    solutions.push_back(solve_p(ref, s));
  }
  return solutions;
}

std::vector<RiccatiSolution> enumerate_q(const ReferenceFamily& ref) {
  std::vector<RiccatiSolution> solutions;
  for (auto& y : enumerate_subspaces(ref.pole_structure())) {
    solutions.push_back(solve_q(ref, y));
  }
  return solutions;
}

}  // namespace specfact
