#include "qsrsr/exact_linalg.hpp"

#include <cassert>
#include <stdexcept>

namespace qsrsr {

RrefResult rref(RationalMatrix a) {
  RrefResult out;
  const std::size_t nr = a.rows();
  const std::size_t nc = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t piv = nr;
    for (std::size_t i = r; i < nr; ++i) {
      if (a.at(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == nr) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < nc; ++j) std::swap(a.at(r, j), a.at(piv, j));
    }
    const Rational inv_pivot = 1 / a.at(r, c);
    for (std::size_t j = c; j < nc; ++j) a.at(r, j) *= inv_pivot;
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == r || a.at(i, c) == 0) continue;
      const Rational f = a.at(i, c);
      for (std::size_t j = c; j < nc; ++j) a.at(i, j) -= f * a.at(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  out.mat = std::move(a);
  return out;
}

std::size_t rank(const RationalMatrix& a) { return rref(a).rank; }

SubspaceBasis SubspaceBasis::zero(std::size_t ambient) {
  SubspaceBasis s;
  s.ambient_ = ambient;
  s.basis_ = RationalMatrix(ambient, 0);
  return s;
}

SubspaceBasis SubspaceBasis::full(std::size_t ambient) {
  SubspaceBasis s;
  s.ambient_ = ambient;
  s.basis_ = RationalMatrix::identity(ambient);
  return s;
}

SubspaceBasis SubspaceBasis::span_of(std::size_t ambient, const RationalMatrix& spanning) {
  assert(spanning.cols() == 0 || spanning.rows() == ambient);
  // Reduced column echelon form = transpose of the rref of the transpose.
  RrefResult r = rref(spanning.transposed());
  SubspaceBasis s;
  s.ambient_ = ambient;
  s.basis_ = RationalMatrix(ambient, r.rank);
  for (std::size_t i = 0; i < r.rank; ++i)
    for (std::size_t j = 0; j < ambient; ++j) s.basis_.at(j, i) = r.mat.at(i, j);
  return s;
}

SubspaceBasis kernel(const RationalMatrix& a) {
  const std::size_t nc = a.cols();
  if (a.rows() == 0) return SubspaceBasis::full(nc);
  RrefResult r = rref(a);
  std::vector<bool> is_pivot(nc, false);
  for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
  RationalMatrix basis(nc, nc - r.rank);
  std::size_t k = 0;
  for (std::size_t f = 0; f < nc; ++f) {
    if (is_pivot[f]) continue;
    basis.at(f, k) = 1;
    for (std::size_t i = 0; i < r.rank; ++i) basis.at(r.pivot_cols[i], k) = -r.mat.at(i, f);
    ++k;
  }
  return SubspaceBasis::span_of(nc, basis);
}

SubspaceBasis image(const RationalMatrix& a) { return SubspaceBasis::span_of(a.rows(), a); }

RationalMatrix annihilator(const SubspaceBasis& w) {
  // kernel of basis^T: row vectors z with z . w = 0 for every basis column w.
  SubspaceBasis k = kernel(w.basis().transposed());
  return k.basis().transposed();
}

SubspaceBasis preimage(const RationalMatrix& b, const SubspaceBasis& w) {
  assert(b.rows() == w.ambient());
  if (w.dim() == w.ambient()) return SubspaceBasis::full(b.cols());
  RationalMatrix ann = annihilator(w);
  return kernel(ann * b);
}

SubspaceBasis subspace_sum(const std::vector<SubspaceBasis>& parts) {
  assert(!parts.empty());
  RationalMatrix all = parts.front().basis();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    assert(parts[i].ambient() == parts.front().ambient());
    all = hcat(all, parts[i].basis());
  }
  return SubspaceBasis::span_of(parts.front().ambient(), all);
}

bool is_contained(const SubspaceBasis& u, const SubspaceBasis& w) {
  assert(u.ambient() == w.ambient());
  if (u.dim() == 0) return true;
  return rank(hcat(w.basis(), u.basis())) == w.dim();
}

RationalMatrix inverse(const RationalMatrix& a) {
  assert(a.rows() == a.cols());
  const std::size_t n = a.rows();
  RrefResult r = rref(hcat(a, RationalMatrix::identity(n)));
  if (r.rank < n || (n > 0 && r.pivot_cols[n - 1] != n - 1))
    throw std::invalid_argument("inverse: matrix is singular");
  return r.mat.block(0, n, n, n);
}

RationalMatrix projector(const SubspaceBasis& u) {
  const std::size_t n = u.ambient();
  if (u.dim() == 0) return RationalMatrix(n, n);
  const RationalMatrix& q = u.basis();
  RationalMatrix qt = q.transposed();
  // q has full column rank, so q^T q is positive definite over Q.
  RationalMatrix gram_inv = inverse(qt * q);
  return q * gram_inv * qt;
}

}  // namespace qsrsr
