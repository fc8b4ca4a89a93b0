#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qsrsr/rational.hpp"

namespace qsrsr {

// Dense matrix of exact rationals, row-major. All arithmetic is exact; GMP
// keeps every entry in reduced form.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  // Row-major literal, e.g. {{"1","2"},{"0","1/3"}}.
  static RationalMatrix from_strings(std::initializer_list<std::initializer_list<const char*>> rows);
  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix transposed() const;
  RationalMatrix block(std::size_t row0, std::size_t col0, std::size_t h, std::size_t w) const;
  void set_block(std::size_t row0, std::size_t col0, const RationalMatrix& b);
  RationalMatrix column(std::size_t j) const { return block(0, j, rows_, 1); }

  bool is_zero() const;
  bool is_symmetric() const;
  Rational trace() const;

  bool operator==(const RationalMatrix& other) const = default;

  std::string to_string() const;  // debugging aid

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator*(const Rational& s, const RationalMatrix& a);

// Horizontal / vertical concatenation. Empty factors (0 columns / 0 rows) are
// allowed as long as the shared dimension matches.
RationalMatrix hcat(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix vcat(const RationalMatrix& a, const RationalMatrix& b);

}  // namespace qsrsr
