#pragma once

#include <vector>

#include "qsrsr/rational_matrix.hpp"

namespace qsrsr {

// Canonical subspace of Q^N: the basis matrix (N x dim, full column rank) is
// kept in reduced column echelon form, so two equal subspaces have
// bit-identical bases.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  static SubspaceBasis zero(std::size_t ambient);
  static SubspaceBasis full(std::size_t ambient);
  // Canonicalizes the column span of `spanning` (columns need not be
  // independent).
  static SubspaceBasis span_of(std::size_t ambient, const RationalMatrix& spanning);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.cols(); }
  const RationalMatrix& basis() const { return basis_; }

  bool operator==(const SubspaceBasis& other) const = default;

 private:
  std::size_t ambient_ = 0;
  RationalMatrix basis_;  // ambient_ x dim, reduced column echelon form
};

struct RrefResult {
  RationalMatrix mat;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form by exact Gauss-Jordan elimination; GMP reduces
// every entry after each pivot operation.
RrefResult rref(RationalMatrix a);

std::size_t rank(const RationalMatrix& a);

// Null space {x : Ax = 0} of an (m x n) matrix, as a subspace of Q^n.
SubspaceBasis kernel(const RationalMatrix& a);

// Column space of an (m x n) matrix, as a subspace of Q^m.
SubspaceBasis image(const RationalMatrix& a);

// {x : Bx in W}. Always contains kernel(B).
SubspaceBasis preimage(const RationalMatrix& b, const SubspaceBasis& w);

// Rows span {z : z^T w = 0 for all w in W}; (ambient - dim W) rows.
RationalMatrix annihilator(const SubspaceBasis& w);

SubspaceBasis subspace_sum(const std::vector<SubspaceBasis>& parts);

bool is_contained(const SubspaceBasis& u, const SubspaceBasis& w);

// Exact inverse of a nonsingular square matrix.
RationalMatrix inverse(const RationalMatrix& a);

// Orthogonal projector onto U, computed as P = Q (Q^T Q)^-1 Q^T from any
// basis Q. Same matrix as QQ^T over an orthonormal basis, but exact: no
// orthonormalization (and hence no irrational entries) is needed.
// Symmetric, idempotent, image(P) = U, rank(P) = dim U.
RationalMatrix projector(const SubspaceBasis& u);

}  // namespace qsrsr
