#include "specfact/matrix_kernel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace specfact {

namespace {

void require_square(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    std::ostringstream oss;
    oss << name << " must be square, got " << m.rows() << "x" << m.cols();
    fail(ErrorCode::DimensionMismatch, oss.str());
  }
}

// Eigendecomposition of a symmetric matrix with all eigenvalues above the
// trace-scaled PD floor.  Shared by sqrtm_spd / inv_sqrtm_spd.
Eigen::SelfAdjointEigenSolver<Matrix> spd_eigen(const Matrix& m,
                                                const char* name) {
  require_square(m, name);
  require_finite(m, name);
  require_symmetric(m, name);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::EigenFailure,
         std::string("symmetric eigendecomposition of ") + name + " failed");
  }
  const double floor = pd_floor(m);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < floor) {
    std::ostringstream oss;
    oss << name << " is not positive definite: min eigenvalue " << min_eig
        << " below floor " << floor;
    fail(ErrorCode::NotPositiveDefinite, oss.str());
  }
  return es;
}

}  // namespace

void require_finite(const Matrix& m, const char* name) {
  if (!m.allFinite()) {
    fail(ErrorCode::NonFinite,
         std::string(name) + " contains NaN or infinite entries");
  }
}

void require_symmetric(const Matrix& m, const char* name) {
  require_square(m, name);
  const double dev = (m - m.transpose()).norm();
  if (dev > tol::kSymmetry * (1.0 + m.norm())) {
    std::ostringstream oss;
    oss << name << " is not symmetric: ||M - M^T|| = " << dev;
    fail(ErrorCode::NotSymmetric, oss.str());
  }
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double pd_floor(const Matrix& m) {
  const double n = static_cast<double>(std::max<Eigen::Index>(1, m.rows()));
  return tol::kPdRtol * (1.0 + std::abs(m.trace()) / n);
}

Matrix pinv(const Matrix& m, double rtol) {
  require_finite(m, "pinv input");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = sigma.size() == 0 ? 0.0 : rtol * sigma(0);
  Vector inv_sigma = Vector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv_sigma(i) = 1.0 / sigma(i);
  }
  Matrix result =
      svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
  if (m.rows() == m.cols() &&
      (m - m.transpose()).norm() <= tol::kSymmetry * (1.0 + m.norm())) {
    result = symmetrize(result);
  }
  return result;
}

int numerical_rank(const Matrix& m, double rtol) {
  require_finite(m, "rank input");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sigma = svd.singularValues();
  const double cutoff = rtol * sigma(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  return rank;
}

Matrix kernel_basis(const Matrix& m, double rtol) {
  require_square(m, "kernel_basis input");
  require_finite(m, "kernel_basis input");
  const Eigen::Index n = m.rows();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = sigma.size() == 0 ? 0.0 : rtol * sigma(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

Matrix sqrtm_spd(const Matrix& m) {
  auto es = spd_eigen(m, "sqrtm_spd input");
  return symmetrize(es.eigenvectors() *
                    es.eigenvalues().cwiseSqrt().asDiagonal() *
                    es.eigenvectors().transpose());
}

Matrix inv_sqrtm_spd(const Matrix& m) {
  auto es = spd_eigen(m, "inv_sqrtm_spd input");
  return symmetrize(es.eigenvectors() *
                    es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                    es.eigenvectors().transpose());
}

Matrix orth_projector(const Matrix& basis) {
  require_finite(basis, "projector basis");
  const Eigen::Index n = basis.rows();
  const Eigen::Index k = basis.cols();
  if (k > n) {
    fail(ErrorCode::DimensionMismatch,
         "projector basis has more columns than rows");
  }
  if (k == 0) return Matrix::Zero(n, n);
  const double dev =
      (basis.transpose() * basis - Matrix::Identity(k, k)).norm();
  if (dev > 1e-10 * (1.0 + std::sqrt(static_cast<double>(k)))) {
    std::ostringstream oss;
    oss << "projector basis is not orthonormal: ||V^T V - I|| = " << dev;
    fail(ErrorCode::NotOrthonormal, oss.str());
  }
  return symmetrize(basis * basis.transpose());
}

std::vector<Complex> eigenvalues_of(const Matrix& m) {
  require_square(m, "eigenvalues_of input");
  require_finite(m, "eigenvalues_of input");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::EigenFailure, "eigenvalue computation did not converge");
  }
  std::vector<Complex> eigs(es.eigenvalues().data(),
                            es.eigenvalues().data() + m.rows());
  std::sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    if (std::abs(a.imag()) != std::abs(b.imag())) {
      return std::abs(a.imag()) < std::abs(b.imag());
    }
    return a.imag() < b.imag();
  });
  return eigs;
}

bool is_unmixed(const Matrix& m, double tol) {
  const auto eigs = eigenvalues_of(m);
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    for (std::size_t j = i; j < eigs.size(); ++j) {
      if (std::abs(eigs[i] * eigs[j] - 1.0) <= tol) return false;
    }
  }
  return true;
}

bool distinct_eigenvalues(const std::vector<Complex>& eigs, double tol) {
  double max_mod = 0.0;
  for (const auto& e : eigs) max_mod = std::max(max_mod, std::abs(e));
  const double gap = tol * (1.0 + max_mod);
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    for (std::size_t j = i + 1; j < eigs.size(); ++j) {
      if (std::abs(eigs[i] - eigs[j]) <= gap) return false;
    }
  }
  return true;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix result(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      result.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b;
    }
  }
  return result;
}

// Schur substitution for X - F^T X F = G.  With F = U S U^T and H = U^T G U
// the transformed equation Y - S^T Y S = H is solved block column by block
// column over the quasi-triangular block partition of S; each block entry
// needs only a <=4x4 linear solve.  Cost is O(n^3) overall.
Matrix solve_stein(const Matrix& f, const Matrix& g) {
  require_square(f, "Stein F");
  require_finite(f, "Stein F");
  require_finite(g, "Stein G");
  if (g.rows() != f.rows() || g.cols() != f.cols()) {
    fail(ErrorCode::DimensionMismatch, "Stein G must match F in size");
  }
  require_symmetric(g, "Stein G");
  if (!is_unmixed(f)) {
    fail(ErrorCode::NotUnmixed,
         "Stein F has an eigenvalue product equal to 1; no unique solution");
  }
  const Eigen::Index n = f.rows();
  if (n == 0) return Matrix(0, 0);

  Eigen::RealSchur<Matrix> schur(f);
  if (schur.info() != Eigen::Success) {
    fail(ErrorCode::EigenFailure, "real Schur decomposition of F failed");
  }
  const Matrix& s = schur.matrixT();
  const Matrix& u = schur.matrixU();
  const Matrix h = u.transpose() * g * u;

  // Diagonal block partition of the quasi-triangular factor.
  std::vector<Eigen::Index> starts;
  std::vector<Eigen::Index> sizes;
  for (Eigen::Index i = 0; i < n;) {
    const Eigen::Index size = (i + 1 < n && s(i + 1, i) != 0.0) ? 2 : 1;
    starts.push_back(i);
    sizes.push_back(size);
    i += size;
  }

  Matrix y = Matrix::Zero(n, n);
  for (std::size_t jb = 0; jb < starts.size(); ++jb) {
    const Eigen::Index sj = starts[jb];
    const Eigen::Index nj = sizes[jb];
    const Matrix sjj = s.block(sj, sj, nj, nj);

    // R = H_:J + S^T (Y_{:,<J} S_{<J,J}); columns < sj of Y are final.
    Matrix r = h.middleCols(sj, nj);
    if (sj > 0) {
      r += s.transpose() * (y.leftCols(sj) * s.block(0, sj, sj, nj));
    }

    for (std::size_t ib = 0; ib < starts.size(); ++ib) {
      const Eigen::Index si = starts[ib];
      const Eigen::Index ni = sizes[ib];
      const Matrix sii = s.block(si, si, ni, ni);

      Matrix rhs = r.middleRows(si, ni);
      if (si > 0) {
        // Rows < si of this block column are final already.
        rhs += s.block(0, si, si, ni).transpose() * y.block(0, sj, si, nj) *
               sjj;
      }

      // Solve y_ij - S_ii^T y_ij S_jj = rhs via vectorization.
      const Matrix lhs = Matrix::Identity(ni * nj, ni * nj) -
                         kron(sjj.transpose(), sii.transpose());
      Eigen::FullPivLU<Matrix> lu(lhs);
      if (!lu.isInvertible()) {
        fail(ErrorCode::NotUnmixed,
             "Stein block solve is singular; eigenvalue product too close "
             "to 1");
      }
      const Vector rhs_vec =
          Eigen::Map<const Vector>(rhs.data(), rhs.size());
      const Vector sol = lu.solve(rhs_vec);
      y.block(si, sj, ni, nj) =
          Eigen::Map<const Matrix>(sol.data(), ni, nj);
    }
  }

  Matrix x = symmetrize(u * y * u.transpose());
  const double residual = (x - f.transpose() * x * f - g).norm();
  if (residual > tol::kResidualRtol * (1.0 + g.norm() + x.norm())) {
    std::ostringstream oss;
    oss << "Stein solution residual " << residual << " exceeds tolerance";
    fail(ErrorCode::ResidualTooLarge, oss.str());
  }
  return x;
}

}  // namespace specfact
