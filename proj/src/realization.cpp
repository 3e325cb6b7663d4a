#include "specfact/realization.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "specfact/riccati.hpp"

namespace specfact {

void validate_dimensions(const StateSpaceModel& m) {
  const Eigen::Index n = m.A.rows();
  const Eigen::Index p = m.D.rows();
  if (m.A.cols() != n || n < 1) {
    fail(ErrorCode::DimensionMismatch, "A must be square and non-empty");
  }
  if (m.D.cols() != p || p < 1) {
    fail(ErrorCode::DimensionMismatch, "D must be square and non-empty");
  }
  if (m.B.rows() != n || m.B.cols() != p) {
    std::ostringstream oss;
    oss << "B must be " << n << "x" << p << ", got " << m.B.rows() << "x"
        << m.B.cols();
    fail(ErrorCode::DimensionMismatch, oss.str());
  }
  if (m.C.rows() != p || m.C.cols() != n) {
    std::ostringstream oss;
    oss << "C must be " << p << "x" << n << ", got " << m.C.rows() << "x"
        << m.C.cols();
    fail(ErrorCode::DimensionMismatch, oss.str());
  }
  require_finite(m.A, "A");
  require_finite(m.B, "B");
  require_finite(m.C, "C");
  require_finite(m.D, "D");
}

Matrix numerator_matrix(const StateSpaceModel& m) {
  Eigen::FullPivLU<Matrix> lu(m.D);
  lu.setThreshold(tol::kRankRtol);
  if (!lu.isInvertible()) {
    fail(ErrorCode::SingularD, "D is numerically singular");
  }
  return m.A - m.B * lu.solve(m.C);
}

ComplexMatrix eval_tf(const StateSpaceModel& m, Complex z) {
  const Eigen::Index n = m.A.rows();
  const ComplexMatrix zi_a =
      z * ComplexMatrix::Identity(n, n) - m.A.cast<Complex>();
  Eigen::FullPivLU<ComplexMatrix> lu(zi_a);
  if (!lu.isInvertible()) {
    std::ostringstream oss;
    oss << "z = (" << z.real() << ", " << z.imag() << ") hits a pole";
    fail(ErrorCode::PoleHit, oss.str());
  }
  return m.C.cast<Complex>() * lu.solve(m.B.cast<Complex>()) +
         m.D.cast<Complex>();
}

ComplexMatrix eval_spectrum(const StateSpaceModel& m, double theta) {
  const ComplexMatrix w = eval_tf(m, std::polar(1.0, theta));
  return w * w.adjoint();
}

std::vector<Complex> poles(const StateSpaceModel& m) {
  return eigenvalues_of(m.A);
}

std::vector<Complex> zeros(const StateSpaceModel& m) {
  return eigenvalues_of(numerator_matrix(m));
}

bool check_minimal(const StateSpaceModel& m, double rtol) {
  const int n = m.state_dim();
  const int p = m.output_dim();
  Matrix ctrb(n, n * p);
  Matrix reached = m.B;
  for (int k = 0; k < n; ++k) {
    ctrb.middleCols(k * p, p) = reached;
    reached = m.A * reached;
  }
  Matrix obs(n, n * p);
  reached = m.C.transpose();
  for (int k = 0; k < n; ++k) {
    obs.middleCols(k * p, p) = reached;
    reached = m.A.transpose() * reached;
  }
  return numerical_rank(ctrb, rtol) == n && numerical_rank(obs, rtol) == n;
}

ReferenceFamily::ReferenceFamily(StateSpaceModel model, Matrix gamma,
                                 Matrix p_plus_inverse,
                                 std::optional<Matrix> q_plus_inverse,
                                 SchurStructure zero_structure,
                                 SchurStructure pole_structure)
    : model_(std::move(model)),
      gamma_(std::move(gamma)),
      p_plus_inverse_(std::move(p_plus_inverse)),
      q_plus_inverse_(std::move(q_plus_inverse)),
      zero_structure_(std::move(zero_structure)),
      pole_structure_(std::move(pole_structure)) {}

const Matrix& ReferenceFamily::q_plus_inverse() const {
  if (!q_plus_inverse_) {
    fail(ErrorCode::SingularA,
         "A is singular; the pole-side anchor solution is undefined");
  }
  return *q_plus_inverse_;
}

ReferenceFamily ReferenceFamily::validate(StateSpaceModel model) {
  validate_dimensions(model);
  const int n = model.state_dim();

  const double d_dev = (model.D - model.D.transpose()).norm();
  if (d_dev > tol::kSymmetry * (1.0 + model.D.norm())) {
    std::ostringstream oss;
    oss << "D must be symmetric: ||D - D^T|| = " << d_dev;
    fail(ErrorCode::AsymmetricD, oss.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> d_eigen(symmetrize(model.D));
  if (d_eigen.info() != Eigen::Success) {
    fail(ErrorCode::EigenFailure, "eigendecomposition of D failed");
  }
  if (d_eigen.eigenvalues().minCoeff() < pd_floor(model.D)) {
    std::ostringstream oss;
    oss << "D must be positive definite: min eigenvalue "
        << d_eigen.eigenvalues().minCoeff();
    fail(ErrorCode::NotPDD, oss.str());
  }

  Matrix gamma = numerator_matrix(model);
  if (numerical_rank(gamma) < n) {
    fail(ErrorCode::SingularGamma,
         "numerator matrix A - B D^{-1} C is singular (a zero at the origin)");
  }
  if (!is_unmixed(model.A)) {
    fail(ErrorCode::MixedA, "A has an eigenvalue product equal to 1");
  }
  if (!is_unmixed(gamma)) {
    fail(ErrorCode::MixedGamma,
         "the numerator matrix has an eigenvalue product equal to 1");
  }
  if (!check_minimal(model)) {
    fail(ErrorCode::NotMinimal, "realization is not minimal");
  }

  Matrix p_anchor = specfact::p_plus_inverse(gamma, model.C, model.D);

  // The pole-side anchor exists only for nonsingular A; its absence is not an
  // admissibility defect (only pole flips need it).
  std::optional<Matrix> q_anchor;
  if (numerical_rank(model.A) == n) {
    q_anchor = specfact::q_plus_inverse(model.A, model.B);
  }

  SchurStructure zero_structure(gamma.transpose());
  SchurStructure pole_structure(model.A);
  return ReferenceFamily(std::move(model), std::move(gamma),
                         std::move(p_anchor), std::move(q_anchor),
                         std::move(zero_structure),
                         std::move(pole_structure));
}

ReferenceFamily check_admissible(StateSpaceModel model) {
  return ReferenceFamily::validate(std::move(model));
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 1e-300) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = gaussian(rng);
  }
  return m;
}

// Real block-diagonal matrix with the requested spectrum: moduli in
// [0.2, 0.8], mix of real eigenvalues and conjugate pairs, pairwise gaps of
// at least `margin`.
bool sample_spectrum(std::mt19937_64& rng, int n, double margin,
                     Matrix& lambda, std::vector<Complex>& eigs) {
  lambda = Matrix::Zero(n, n);
  eigs.clear();
  int at = 0;
  while (at < n) {
    if (n - at >= 2 && uniform01(rng) < 0.5) {
      const double r = uniform(rng, 0.2, 0.8);
      const double phi = uniform(rng, 0.3, std::numbers::pi - 0.3);
      const double re = r * std::cos(phi);
      const double im = r * std::sin(phi);
      lambda.block(at, at, 2, 2) << re, im, -im, re;
      eigs.emplace_back(re, im);
      eigs.emplace_back(re, -im);
      at += 2;
    } else {
      const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
      const double value = sign * uniform(rng, 0.2, 0.8);
      lambda(at, at) = value;
      eigs.emplace_back(value, 0.0);
      at += 1;
    }
  }
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    for (std::size_t j = i + 1; j < eigs.size(); ++j) {
      if (std::abs(eigs[i] - eigs[j]) < margin) return false;
    }
  }
  return true;
}

// Generation margins, deliberately wider than the validation tolerances so
// the generated corpus never sits on a decision boundary.
constexpr double kGenEigMargin = 0.02;
constexpr double kGenUnmixedMargin = 0.02;
constexpr double kGenCondBound = 50.0;
constexpr int kGenMaxAttempts = 500;

}  // namespace

StateSpaceModel random_admissible(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) {
    fail(ErrorCode::DimensionMismatch,
         "random_admissible needs n >= 1 and m >= 1");
  }
  std::mt19937_64 rng(seed);
  std::string last_reason = "no attempt made";

  for (int attempt = 0; attempt < kGenMaxAttempts; ++attempt) {
    Matrix lambda;
    std::vector<Complex> spectrum;
    if (!sample_spectrum(rng, n, kGenEigMargin, lambda, spectrum)) {
      last_reason = "eigenvalue gap below margin";
      continue;
    }

    const Matrix basis = gaussian_matrix(rng, n, n);
    Eigen::JacobiSVD<Matrix> basis_svd(basis);
    const auto& sigma = basis_svd.singularValues();
    if (sigma(n - 1) <= 0.0 || sigma(0) / sigma(n - 1) > kGenCondBound) {
      last_reason = "similarity basis too ill-conditioned";
      continue;
    }
    const Matrix a =
        basis * lambda * basis.partialPivLu().solve(Matrix::Identity(n, n));

    StateSpaceModel model;
    model.A = a;
    model.B = gaussian_matrix(rng, n, m);
    model.C = gaussian_matrix(rng, m, n);
    const Matrix g = gaussian_matrix(rng, m, m);
    model.D = Matrix::Identity(m, m) + 0.05 * symmetrize(g * g.transpose());

    // Margin checks on the numerator spectrum before the strict validation.
    Matrix gamma;
    try {
      gamma = numerator_matrix(model);
    } catch (const Error&) {
      last_reason = "singular D";
      continue;
    }
    const auto gamma_eigs = eigenvalues_of(gamma);
    double max_mod = 0.0;
    for (const auto& e : gamma_eigs) max_mod = std::max(max_mod, std::abs(e));
    if (!distinct_eigenvalues(gamma_eigs, kGenEigMargin / (1.0 + max_mod))) {
      last_reason = "numerator eigenvalues too close";
      continue;
    }
    if (!is_unmixed(gamma, kGenUnmixedMargin)) {
      last_reason = "numerator spectrum too close to mixed";
      continue;
    }
    bool near_singular = false;
    for (const auto& e : gamma_eigs) {
      if (std::abs(e) < 1e-3) near_singular = true;
    }
    if (near_singular) {
      last_reason = "numerator eigenvalue too close to the origin";
      continue;
    }

    try {
      const ReferenceFamily family = check_admissible(model);
      // Anchor conditioning margins keep downstream rank decisions away
      // from the cutoff.
      Eigen::JacobiSVD<Matrix> p_svd(family.p_plus_inverse());
      const auto& ps = p_svd.singularValues();
      if (ps(n - 1) < 1e-6 * (1.0 + ps(0))) {
        last_reason = "zero-side anchor nearly singular";
        continue;
      }
      Eigen::JacobiSVD<Matrix> q_svd(family.q_plus_inverse());
      const auto& qs = q_svd.singularValues();
      if (qs(n - 1) < 1e-6 * (1.0 + qs(0))) {
        last_reason = "pole-side anchor nearly singular";
        continue;
      }
    } catch (const Error& e) {
      last_reason = e.what();
      continue;
    }
    return model;
  }

  std::ostringstream oss;
  oss << "no admissible model after " << kGenMaxAttempts
      << " attempts (n = " << n << ", m = " << m << ", seed = " << seed
      << "); last failure: " << last_reason;
  fail(ErrorCode::GenerationFailure, oss.str());
}

}  // namespace specfact
