#pragma once

#include <vector>

#include "specfact/matrix_kernel.hpp"

namespace specfact {

// One diagonal block of a canonically ordered real Schur form: a 1x1 block
// carries a real eigenvalue, a 2x2 block a conjugate pair (stored with
// positive imaginary part).
struct SchurBlock {
  int offset = 0;
  int size = 1;
  Complex eigenvalue;
};

// Real Schur decomposition M = U T U^T with the diagonal blocks sorted into a
// canonical order: ascending real part, then ascending |imag|, then 1x1
// before 2x2.  The ordering is realized by adjacent block swaps, so any
// prefix of blocks spans an invariant subspace of M.
class SchurStructure {
 public:
  explicit SchurStructure(Matrix source);

  const Matrix& source() const { return source_; }
  const Matrix& quasi_triangular() const { return t_; }
  const Matrix& orthogonal() const { return u_; }
  const std::vector<SchurBlock>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int dim() const { return static_cast<int>(source_.rows()); }

  // Eigenvalues expanded block by block (a 2x2 block contributes the pair).
  std::vector<Complex> eigenvalues() const;

  bool has_distinct_eigenvalues(double tol = tol::kDistinct) const;

  // Orthonormal basis of the invariant subspace spanned by the selected
  // blocks (sorted, unique, in range).  Columns: sum of selected block sizes.
  Matrix basis_for(const std::vector<int>& block_ids) const;

 private:
  Matrix source_;
  Matrix t_;
  Matrix u_;
  std::vector<SchurBlock> blocks_;
};

// An invariant subspace tagged with the canonical block ids that span it.
struct InvariantSubspace {
  std::vector<int> block_ids;
  Matrix basis;  // n x k, orthonormal columns
};

// Builds and validates the invariant subspace for a block selection.
InvariantSubspace invariant_subspace(const SchurStructure& s,
                                     std::vector<int> block_ids);

// All 2^(#blocks) invariant subspaces in subset-mask order (empty set first,
// full set last).  Requires distinct eigenvalues so that the collection is
// exactly the lattice of invariant subspaces.
std::vector<InvariantSubspace> enumerate_subspaces(const SchurStructure& s);

// Maps each block of `from` to the block of `to` with the nearest eigenvalue
// of the same size; throws EigenFailure if no unambiguous match exists.
std::vector<int> match_blocks(const SchurStructure& from,
                              const SchurStructure& to);

// Sine of the largest principal angle between two equal-dimension subspaces
// given by orthonormal bases; returns 1 when the dimensions differ.
double subspace_gap(const Matrix& v, const Matrix& w);

// Throws InvarianceViolation unless ||(I - VV^T) M V|| <= tol * (1 + ||M||).
void require_invariant(const Matrix& m, const Matrix& basis,
                       double tol = tol::kInvariance);

}  // namespace specfact
