#include "specfact/factor_flip.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "specfact/verify.hpp"

namespace specfact {

namespace {

// Zero flip of the pole-flipped factor, written out directly on its matrices
// (W_Q never has to be re-validated as a reference).
StateSpaceModel assemble_combined(const PoleFlipMatrices& pole,
                                  const Matrix& p_q) {
  const Matrix inner = symmetrize(pole.d_q * pole.d_q.transpose() +
                                  pole.c_q * p_q * pole.c_q.transpose());
  StateSpaceModel model;
  model.A = pole.a_q;
  model.C = pole.c_q;
  model.D = sqrtm_spd(inner);
  model.B = (pole.b_q * pole.d_q.transpose() +
             pole.a_q * p_q * pole.c_q.transpose()) *
            inv_sqrtm_spd(inner);
  return model;
}

}  // namespace

PoleFlipMatrices pole_flip_matrices(const ReferenceFamily& ref,
                                    const Matrix& q) {
  const StateSpaceModel& model = ref.model();
  const Eigen::Index m = model.B.cols();

  PoleFlipMatrices mats;
  mats.delta = symmetrize(Matrix::Identity(m, m) +
                          model.B.transpose() * q * model.B);
  Eigen::SelfAdjointEigenSolver<Matrix> es(mats.delta);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::EigenFailure, "eigendecomposition of I + B^T Q B failed");
  }
  if (es.eigenvalues().minCoeff() < pd_floor(mats.delta)) {
    std::ostringstream oss;
    oss << "I + B^T Q B is not positive definite (min eigenvalue "
        << es.eigenvalues().minCoeff() << ")";
    fail(ErrorCode::DeltaNotPD, oss.str());
  }
  const Matrix delta_inv = symmetrize(
      es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose());
  const Matrix delta_inv_sqrt = symmetrize(
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose());

  const Matrix gain = delta_inv * model.B.transpose() * q * model.A;
  mats.a_q = model.A - model.B * gain;
  mats.c_q = model.C - model.D * gain;

  // Orthogonal U with (D Delta^{-1/2}) U symmetric positive definite, from
  // the SVD of D Delta^{-1/2}.
  const Matrix half = model.D * delta_inv_sqrt;
  Eigen::JacobiSVD<Matrix> svd(half,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (sigma(m - 1) <= tol::kRankRtol * sigma(0)) {
    fail(ErrorCode::PolarFailure,
         "D Delta^{-1/2} is numerically singular; no positive definite "
         "normalization exists");
  }
  mats.u = svd.matrixV() * svd.matrixU().transpose();
  mats.b_q = model.B * delta_inv_sqrt * mats.u;
  mats.d_q = symmetrize(half * mats.u);
  return mats;
}

StateSpaceModel flip_zeros(const ReferenceFamily& ref,
                           const RiccatiSolution& p) {
  const StateSpaceModel& model = ref.model();
  const Matrix inner = symmetrize(model.D * model.D.transpose() +
                                  model.C * p.matrix * model.C.transpose());
  StateSpaceModel flipped;
  flipped.A = model.A;
  flipped.C = model.C;
  flipped.D = sqrtm_spd(inner);
  flipped.B = (model.B * model.D.transpose() +
               model.A * p.matrix * model.C.transpose()) *
              inv_sqrtm_spd(inner);
  return flipped;
}

StateSpaceModel flip_poles(const ReferenceFamily& ref,
                           const RiccatiSolution& q) {
  const PoleFlipMatrices mats = pole_flip_matrices(ref, q.matrix);
  StateSpaceModel flipped;
  flipped.A = mats.a_q;
  flipped.B = mats.b_q;
  flipped.C = mats.c_q;
  flipped.D = mats.d_q;
  return flipped;
}

FlipComputation flip_both_detail(const ReferenceFamily& ref,
                                 const FlipSpec& spec) {
  FlipComputation comp;
  comp.q = solve_q(
      ref, invariant_subspace(ref.pole_structure(), spec.pole_blocks));
  comp.p = solve_p(
      ref, invariant_subspace(ref.zero_structure(), spec.zero_blocks));
  comp.p_q = combine_pq(ref, comp.p, comp.q);
  comp.pole = pole_flip_matrices(ref, comp.q.matrix);
  comp.model = assemble_combined(comp.pole, comp.p_q.matrix);
  return comp;
}

StateSpaceModel flip_both(const ReferenceFamily& ref, const FlipSpec& spec) {
  return flip_both_detail(ref, spec).model;
}

StateSpaceModel flip_both_dual(const ReferenceFamily& ref,
                               const FlipSpec& spec) {
  const RiccatiSolution p = solve_p(
      ref, invariant_subspace(ref.zero_structure(), spec.zero_blocks));
  const ReferenceFamily flipped = check_admissible(flip_zeros(ref, p));

  // The zero flip leaves A untouched, but the canonical pole blocks of the
  // new family are re-derived, so map the selection across.
  const std::vector<int> map =
      match_blocks(ref.pole_structure(), flipped.pole_structure());
  std::vector<int> mapped_ids;
  mapped_ids.reserve(spec.pole_blocks.size());
  for (int id : spec.pole_blocks) mapped_ids.push_back(map.at(id));
  std::sort(mapped_ids.begin(), mapped_ids.end());

  const RiccatiSolution q = solve_q(
      flipped, invariant_subspace(flipped.pole_structure(), mapped_ids));
  return flip_poles(flipped, q);
}

StateSpaceModel total_flip(const ReferenceFamily& ref) {
  return flip_both(ref, FlipSpec{});
}

std::vector<std::pair<FlipSpec, StateSpaceModel>> enumerate_factors(
    const ReferenceFamily& ref) {
  const auto zero_subspaces = enumerate_subspaces(ref.zero_structure());
  const auto pole_subspaces = enumerate_subspaces(ref.pole_structure());

  // Everything that depends only on the pole selection is computed once.
  struct PoleSide {
    RiccatiSolution q;
    PoleFlipMatrices mats;
  };
  std::vector<PoleSide> pole_sides;
  pole_sides.reserve(pole_subspaces.size());
  for (const auto& y : pole_subspaces) {
    PoleSide side;
    side.q = solve_q(ref, y);
    side.mats = pole_flip_matrices(ref, side.q.matrix);
    pole_sides.push_back(std::move(side));
  }
  std::vector<RiccatiSolution> zero_sides;
  zero_sides.reserve(zero_subspaces.size());
  for (const auto& s : zero_subspaces) zero_sides.push_back(solve_p(ref, s));

  const double scale = spectrum_scale(ref.model(), tol::kSamples);

  std::vector<std::pair<FlipSpec, StateSpaceModel>> factors;
  factors.reserve(zero_sides.size() * pole_sides.size());
  for (const auto& p : zero_sides) {
    for (const auto& side : pole_sides) {
      const RiccatiSolution p_q = combine_pq(ref, p, side.q);
      const StateSpaceModel factor = assemble_combined(side.mats, p_q.matrix);

      const double error = spectra_match(ref.model(), factor, tol::kSamples);
      if (error > tol::kSpectral * (1.0 + scale)) {
        std::ostringstream oss;
        oss << "enumerated factor misses the reference spectrum by " << error;
        fail(ErrorCode::VerificationFailure, oss.str());
      }
      factors.emplace_back(
          FlipSpec{p.kernel.block_ids, side.q.kernel.block_ids}, factor);
    }
  }
  return factors;
}

}  // namespace specfact
