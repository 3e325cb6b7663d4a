#pragma once

// Brute-force reference implementations and frozen closed-form values shared
// by the test suite.  Every frozen number below was derived by hand from the
// defining equations of the scalar family a = 0.5, b = c = d = 1 and is
// independent of the code under test.

#include <optional>
#include <random>

#include "specfact/model_io.hpp"

namespace oracles {

using specfact::Complex;
using specfact::Matrix;
using specfact::StateSpaceModel;
using specfact::Vector;

// ---- scalar family -------------------------------------------------------
//
// W(z) = cb/(z - a) + d = (z + 0.5)/(z - 0.5); numerator matrix
// Gamma = a - bc/d = -0.5; spectral density
// Phi(z) = (z^2 + 2.5 z + 1)/(-z^2 + 2.5 z - 1).

inline StateSpaceModel scalar_model(double a, double b, double c, double d) {
  StateSpaceModel m;
  m.A = Matrix::Constant(1, 1, a);
  m.B = Matrix::Constant(1, 1, b);
  m.C = Matrix::Constant(1, 1, c);
  m.D = Matrix::Constant(1, 1, d);
  return m;
}

inline StateSpaceModel reference_scalar() {
  return scalar_model(0.5, 1.0, 1.0, 1.0);
}

// Anchor Stein solutions: X - 0.25 X = -1  =>  X = -4/3, on both sides.
inline constexpr double kPPlusInverse = -4.0 / 3.0;
inline constexpr double kQPlusInverse = -4.0 / 3.0;

// The nontrivial Riccati solutions (trivial kernel): the anchor inverses.
inline constexpr double kPMax = -0.75;
inline constexpr double kQMax = -0.75;

// Combined solution for the fully pole-flipped factor:
// P_Q = 1/(Q + 1/P) = 1/(-0.75 - 4/3) = -12/25.
inline constexpr double kPQ = -0.48;

// Zero flip by P = -0.75: D_P = sqrt(1 - 0.75) = 0.5,
// B_P = (1 + 0.5 * (-0.75)) / 0.5 = 1.25.
inline constexpr double kBP = 1.25;
inline constexpr double kDP = 0.5;

// Pole flip by Q = -0.75: Delta = 0.25, A_Q = 2, B_Q = 2, C_Q = 2.5, D_Q = 2.
inline constexpr double kDelta = 0.25;
inline constexpr double kAQ = 2.0;
inline constexpr double kBQ = 2.0;
inline constexpr double kCQ = 2.5;
inline constexpr double kDQ = 2.0;

// Total flip: D = sqrt(4 + 6.25 * (-0.48)) = 1, B = (4 - 2.4)/1 = 1.6.
inline constexpr double kBTotal = 1.6;
inline constexpr double kDTotal = 1.0;

// Residual of the non-solution P = 1 in the zero-flip equation:
// |1 - 0.25 + 0.25 * 1 / (1 + 1)| = 0.875.
inline constexpr double kNonSolutionResidual = 0.875;

// Spectral density values on the unit circle.
inline constexpr double kPhiAtOne = 9.0;
inline constexpr double kPhiAtMinusOne = 1.0 / 9.0;

// First-order rational (n1 z + n0)/(z - root); the four factors of the
// scalar family.
struct Rational {
  double n1, n0, root;
};
inline constexpr Rational kFactorReference{1.0, 0.5, 0.5};
inline constexpr Rational kFactorZeroFlip{0.5, 1.0, 0.5};
inline constexpr Rational kFactorPoleFlip{2.0, 1.0, 2.0};
inline constexpr Rational kFactorTotalFlip{1.0, 2.0, 2.0};

inline Complex eval_rational(const Rational& r, Complex z) {
  return (r.n1 * z + r.n0) / (z - r.root);
}

// ---- brute-force references ----------------------------------------------

// Whole-equation Kronecker solve of X - F^T X F = G; O(n^6), the oracle for
// the production Stein solver on small problems.
inline Matrix stein_kron(const Matrix& f, const Matrix& g) {
  const Eigen::Index n = f.rows();
  const Matrix lhs = Matrix::Identity(n * n, n * n) -
                     specfact::kron(f.transpose(), f.transpose());
  const Vector rhs = Eigen::Map<const Vector>(g.data(), g.size());
  const Vector x = lhs.fullPivLu().solve(rhs);
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

// ---- deterministic randomness (independent of the library generator) -----

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline double gauss(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 1e-300) u1 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * uniform01(rng));
}

inline Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  }
  return m;
}

inline Matrix random_orthonormal(std::mt19937_64& rng, int n, int k) {
  const Matrix g = gaussian_matrix(rng, n, k);
  const Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, k);
}

inline Matrix random_spd(std::mt19937_64& rng, int n) {
  const Matrix g = gaussian_matrix(rng, n, n);
  return specfact::symmetrize(g * g.transpose()) + Matrix::Identity(n, n);
}

// Random unmixed matrix with eigenvalue moduli drawn from
// [0.1, 0.9] or [1.2, 5]; the margin keeps all products away from 1.
inline Matrix random_unmixed(std::mt19937_64& rng, int n) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Matrix lambda = Matrix::Zero(n, n);
    std::vector<Complex> eigs;
    int at = 0;
    while (at < n) {
      const bool small_band = uniform01(rng) < 0.5;
      const double mod = small_band ? uniform(rng, 0.1, 0.9)
                                    : uniform(rng, 1.2, 5.0);
      if (n - at >= 2 && uniform01(rng) < 0.4) {
        const double phi = uniform(rng, 0.3, 2.8);
        const double re = mod * std::cos(phi);
        const double im = mod * std::sin(phi);
        lambda.block(at, at, 2, 2) << re, im, -im, re;
        eigs.emplace_back(re, im);
        eigs.emplace_back(re, -im);
        at += 2;
      } else {
        const double value = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * mod;
        lambda(at, at) = value;
        eigs.emplace_back(value, 0.0);
        at += 1;
      }
    }
    bool ok = true;
    for (std::size_t i = 0; i < eigs.size() && ok; ++i) {
      for (std::size_t j = i; j < eigs.size(); ++j) {
        if (std::abs(eigs[i] * eigs[j] - 1.0) < 0.05) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    const Matrix basis = gaussian_matrix(rng, n, n);
    Eigen::JacobiSVD<Matrix> svd(basis);
    if (svd.singularValues()(n - 1) <
        svd.singularValues()(0) / 50.0) {
      continue;
    }
    return basis * lambda *
           basis.partialPivLu().solve(Matrix::Identity(n, n));
  }
  throw std::runtime_error("random_unmixed failed to produce a sample");
}

// ---- error assertions -----------------------------------------------------

template <typename Fn>
inline std::optional<specfact::ErrorCode> error_code_of(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const specfact::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace oracles
