#include "qsrsr/rational_matrix.hpp"

#include <cassert>
#include <sstream>

namespace qsrsr {

RationalMatrix RationalMatrix::from_strings(
    std::initializer_list<std::initializer_list<const char*>> rows) {
  RationalMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
  std::size_t i = 0;
  for (const auto& row : rows) {
    assert(row.size() == m.cols_);
    std::size_t j = 0;
    for (const char* cell : row) m.at(i, j++) = parse_rational(cell);
    ++i;
  }
  return m;
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RationalMatrix RationalMatrix::block(std::size_t row0, std::size_t col0, std::size_t h,
                                     std::size_t w) const {
  assert(row0 + h <= rows_ && col0 + w <= cols_);
  RationalMatrix b(h, w);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) b.at(i, j) = at(row0 + i, col0 + j);
  return b;
}

void RationalMatrix::set_block(std::size_t row0, std::size_t col0, const RationalMatrix& b) {
  assert(row0 + b.rows() <= rows_ && col0 + b.cols() <= cols_);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) at(row0 + i, col0 + j) = b.at(i, j);
}

bool RationalMatrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

Rational RationalMatrix::trace() const {
  assert(rows_ == cols_);
  Rational t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

std::string RationalMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << " ";
      os << format_rational(at(i, j));
    }
    os << "]\n";
  }
  return os.str();
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  RationalMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
  return c;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  RationalMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) - b.at(i, j);
  return c;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  assert(a.cols() == b.rows());
  RationalMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b.at(k, j) == 0) continue;
        c.at(i, j) += aik * b.at(k, j);
      }
    }
  return c;
}

RationalMatrix operator*(const Rational& s, const RationalMatrix& a) {
  RationalMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = s * a.at(i, j);
  return c;
}

RationalMatrix hcat(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.empty() && a.rows() == 0) return b;
  if (b.empty() && b.rows() == 0) return a;
  assert(a.rows() == b.rows());
  RationalMatrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

RationalMatrix vcat(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.empty() && a.cols() == 0) return b;
  if (b.empty() && b.cols() == 0) return a;
  assert(a.cols() == b.cols());
  RationalMatrix c(a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

}  // namespace qsrsr
