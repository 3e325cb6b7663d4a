#include "specfact/schur.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace specfact {

namespace {

struct RawBlock {
  int size = 1;
  Complex eigenvalue;  // 2x2 blocks store the member with imag > 0
};

// Eigenvalue of a diagonal Schur block.  A 2x2 block of a real Schur form
// always carries a conjugate pair, so a non-negative discriminant signals a
// broken decomposition.
Complex block_eigenvalue(const Matrix& t, int offset, int size) {
  if (size == 1) return Complex(t(offset, offset), 0.0);
  const double a = t(offset, offset);
  const double b = t(offset, offset + 1);
  const double c = t(offset + 1, offset);
  const double d = t(offset + 1, offset + 1);
  const double mean = 0.5 * (a + d);
  const double disc = 0.25 * (a - d) * (a - d) + b * c;
  if (disc >= 0.0) {
    fail(ErrorCode::EigenFailure,
         "2x2 Schur block does not carry a conjugate pair");
  }
  return Complex(mean, std::sqrt(-disc));
}

bool block_order_before(const RawBlock& x, const RawBlock& y) {
  if (x.eigenvalue.real() != y.eigenvalue.real()) {
    return x.eigenvalue.real() < y.eigenvalue.real();
  }
  if (x.eigenvalue.imag() != y.eigenvalue.imag()) {
    return x.eigenvalue.imag() < y.eigenvalue.imag();
  }
  return x.size < y.size;
}

// Swaps the adjacent diagonal blocks at `offset` (sizes p, then q) of the
// Schur pair (t, u) by an orthogonal similarity, so the q-block's
// eigenvalues move in front of the p-block's.
void swap_adjacent(Matrix& t, Matrix& u, int offset, int p, int q) {
  const int w = p + q;
  const Matrix a11 = t.block(offset, offset, p, p);
  const Matrix a12 = t.block(offset, offset + p, p, q);
  const Matrix a22 = t.block(offset + p, offset + p, q, q);

  // A11 X - X A22 = A12; the stacked columns [X; -I] then span the invariant
  // subspace belonging to A22.
  const Matrix lhs = kron(Matrix::Identity(q, q), a11) -
                     kron(a22.transpose(), Matrix::Identity(p, p));
  Eigen::FullPivLU<Matrix> lu(lhs);
  if (!lu.isInvertible()) {
    fail(ErrorCode::EigenFailure,
         "Schur block swap is singular; eigenvalues too close");
  }
  const Vector a12_vec = Eigen::Map<const Vector>(a12.data(), a12.size());
  const Vector x_vec = lu.solve(a12_vec);
  const Matrix x = Eigen::Map<const Matrix>(x_vec.data(), p, q);

  Matrix z(w, q);
  z.topRows(p) = x;
  z.bottomRows(q) = -Matrix::Identity(q, q);
  const Eigen::HouseholderQR<Matrix> qr(z);
  const Matrix v = qr.householderQ() * Matrix::Identity(w, w);

  t.middleRows(offset, w) = v.transpose() * t.middleRows(offset, w);
  t.middleCols(offset, w) = t.middleCols(offset, w) * v;
  u.middleCols(offset, w) = u.middleCols(offset, w) * v;

  const double spill = t.block(offset + q, offset, p, q).norm();
  if (spill > 1e-8 * (1.0 + t.norm())) {
    std::ostringstream oss;
    oss << "Schur block swap left residue " << spill;
    fail(ErrorCode::EigenFailure, oss.str());
  }
  t.block(offset + q, offset, p, q).setZero();
}

std::vector<RawBlock> scan_blocks(const Matrix& t) {
  const int n = static_cast<int>(t.rows());
  std::vector<RawBlock> blocks;
  for (int i = 0; i < n;) {
    const int size = (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
    blocks.push_back({size, block_eigenvalue(t, i, size)});
    i += size;
  }
  return blocks;
}

// Reorders the blocks listed in `slots` (current slot -> block identity) so
// that identities in `targets` occupy the leading slots in the given order.
// Sizes travel with the identities; offsets are prefix sums of sizes.
void bubble_to_front(Matrix& t, Matrix& u, std::vector<int>& slots,
                     std::vector<int>& sizes, const std::vector<int>& targets) {
  for (std::size_t pos = 0; pos < targets.size(); ++pos) {
    std::size_t from = pos;
    while (from < slots.size() &&
           slots[from] != targets[pos]) {
      ++from;
    }
    if (from == slots.size()) {
      fail(ErrorCode::EigenFailure, "Schur reorder lost a block");
    }
    for (std::size_t s = from; s > pos; --s) {
      int offset = 0;
      for (std::size_t k = 0; k + 1 < s; ++k) offset += sizes[k];
      swap_adjacent(t, u, offset, sizes[s - 1], sizes[s]);
      std::swap(sizes[s - 1], sizes[s]);
      std::swap(slots[s - 1], slots[s]);
    }
  }
}

}  // namespace

SchurStructure::SchurStructure(Matrix source) : source_(std::move(source)) {
  if (source_.rows() != source_.cols() || source_.rows() == 0) {
    fail(ErrorCode::DimensionMismatch,
         "Schur source must be square and non-empty");
  }
  require_finite(source_, "Schur source");

  Eigen::RealSchur<Matrix> schur(source_);
  if (schur.info() != Eigen::Success) {
    fail(ErrorCode::EigenFailure, "real Schur decomposition failed");
  }
  t_ = schur.matrixT();
  u_ = schur.matrixU();

  const std::vector<RawBlock> raw = scan_blocks(t_);
  const int count = static_cast<int>(raw.size());

  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&raw](int a, int b) {
    return block_order_before(raw[a], raw[b]);
  });

  std::vector<int> slots(count);
  std::iota(slots.begin(), slots.end(), 0);
  std::vector<int> sizes(count);
  for (int i = 0; i < count; ++i) sizes[i] = raw[i].size;
  bubble_to_front(t_, u_, slots, sizes, order);

  blocks_.resize(count);
  int offset = 0;
  for (int i = 0; i < count; ++i) {
    blocks_[i].offset = offset;
    blocks_[i].size = raw[order[i]].size;
    blocks_[i].eigenvalue = raw[order[i]].eigenvalue;
    offset += blocks_[i].size;
  }
}

std::vector<Complex> SchurStructure::eigenvalues() const {
  std::vector<Complex> eigs;
  eigs.reserve(dim());
  for (const auto& block : blocks_) {
    if (block.size == 1) {
      eigs.push_back(block.eigenvalue);
    } else {
      eigs.push_back(std::conj(block.eigenvalue));
      eigs.push_back(block.eigenvalue);
    }
  }
  return eigs;
}

bool SchurStructure::has_distinct_eigenvalues(double tol) const {
  return distinct_eigenvalues(eigenvalues(), tol);
}

Matrix SchurStructure::basis_for(const std::vector<int>& block_ids) const {
  const int count = block_count();
  for (std::size_t i = 0; i < block_ids.size(); ++i) {
    if (block_ids[i] < 0 || block_ids[i] >= count) {
      std::ostringstream oss;
      oss << "block id " << block_ids[i] << " out of range [0, " << count
          << ")";
      fail(ErrorCode::DimensionMismatch, oss.str());
    }
    if (i > 0 && block_ids[i] <= block_ids[i - 1]) {
      fail(ErrorCode::DimensionMismatch,
           "block ids must be strictly ascending");
    }
  }
  if (block_ids.empty()) return Matrix(dim(), 0);

  Matrix t = t_;
  Matrix u = u_;
  std::vector<int> slots(count);
  std::iota(slots.begin(), slots.end(), 0);
  std::vector<int> sizes(count);
  for (int i = 0; i < count; ++i) sizes[i] = blocks_[i].size;
  bubble_to_front(t, u, slots, sizes, block_ids);

  int k = 0;
  for (int id : block_ids) k += blocks_[id].size;
  return u.leftCols(k);
}

InvariantSubspace invariant_subspace(const SchurStructure& s,
                                     std::vector<int> block_ids) {
  InvariantSubspace sub;
  sub.basis = s.basis_for(block_ids);
  sub.block_ids = std::move(block_ids);
  orth_projector(sub.basis);  // validates orthonormality
  require_invariant(s.source(), sub.basis);
  return sub;
}

std::vector<InvariantSubspace> enumerate_subspaces(const SchurStructure& s) {
  if (!s.has_distinct_eigenvalues()) {
    fail(ErrorCode::RepeatedEigenvalues,
         "subspace enumeration requires distinct eigenvalues");
  }
  const int count = s.block_count();
  if (count > 16) {
    std::ostringstream oss;
    oss << "enumeration over 2^" << count << " subsets refused";
    fail(ErrorCode::EnumerationTooLarge, oss.str());
  }
  std::vector<InvariantSubspace> subspaces;
  subspaces.reserve(std::size_t{1} << count);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << count); ++mask) {
    std::vector<int> ids;
    for (int b = 0; b < count; ++b) {
      if (mask & (std::uint64_t{1} << b)) ids.push_back(b);
    }
    subspaces.push_back(invariant_subspace(s, std::move(ids)));
  }
  return subspaces;
}

std::vector<int> match_blocks(const SchurStructure& from,
                              const SchurStructure& to) {
  if (from.block_count() != to.block_count()) {
    fail(ErrorCode::EigenFailure,
         "block matching requires equal block counts");
  }
  const int count = from.block_count();
  std::vector<bool> used(count, false);
  std::vector<int> map(count, -1);
  for (int i = 0; i < count; ++i) {
    const auto& fb = from.blocks()[i];
    int best = -1;
    double best_dist = 0.0;
    for (int j = 0; j < count; ++j) {
      if (used[j] || to.blocks()[j].size != fb.size) continue;
      const double dist = std::abs(to.blocks()[j].eigenvalue - fb.eigenvalue);
      if (best < 0 || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best < 0 ||
        best_dist > 1e-6 * (1.0 + std::abs(fb.eigenvalue))) {
      std::ostringstream oss;
      oss << "no matching block for eigenvalue (" << fb.eigenvalue.real()
          << ", " << fb.eigenvalue.imag() << ")";
      fail(ErrorCode::EigenFailure, oss.str());
    }
    used[best] = true;
    map[i] = best;
  }
  return map;
}

double subspace_gap(const Matrix& v, const Matrix& w) {
  if (v.rows() != w.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "subspace bases must share the ambient dimension");
  }
  if (v.cols() != w.cols()) return 1.0;
  if (v.cols() == 0) return 0.0;
  const Matrix residual = v - w * (w.transpose() * v);
  Eigen::JacobiSVD<Matrix> svd(residual);
  return std::min(1.0, svd.singularValues()(0));
}

void require_invariant(const Matrix& m, const Matrix& basis, double tol) {
  if (m.rows() != m.cols() || basis.rows() != m.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "invariance check dimensions do not agree");
  }
  if (basis.cols() == 0) return;
  const Matrix image = m * basis;
  const double dev = (image - basis * (basis.transpose() * image)).norm();
  if (dev > tol * (1.0 + m.norm())) {
    std::ostringstream oss;
    oss << "subspace is not invariant: deviation " << dev;
    fail(ErrorCode::InvarianceViolation, oss.str());
  }
}

}  // namespace specfact
