#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stabex/ring.hpp"

namespace stabex {

/// Dense row-major matrix over Z/n. 0xk and kx0 matrices are legal.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, uint32_t mod)
      : rows_(rows), cols_(cols), mod_(mod), e_(rows * cols, 0) {}
  Matrix(size_t rows, size_t cols, uint32_t mod, std::vector<int64_t> entries);

  static Matrix identity(size_t n, uint32_t mod);
  static Matrix zero(size_t rows, size_t cols, uint32_t mod) { return Matrix(rows, cols, mod); }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  uint32_t mod() const { return mod_; }
  RingSpec ring() const { return RingSpec(mod_); }

  uint32_t at(size_t r, size_t c) const { return e_[r * cols_ + c]; }
  uint32_t& at(size_t r, size_t c) { return e_[r * cols_ + c]; }
  const std::vector<uint32_t>& data() const { return e_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && mod_ == o.mod_ && e_ == o.e_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const;

  Matrix mul(const Matrix& rhs) const;
  Matrix add(const Matrix& rhs) const;
  Matrix sub(const Matrix& rhs) const;
  Matrix neg() const;
  Matrix scale(uint32_t c) const;
  Matrix transpose() const;

  Matrix hstack(const Matrix& right) const;  // same rows
  Matrix vstack(const Matrix& below) const;  // same cols
  Matrix col_slice(size_t c0, size_t c1) const;
  Matrix row_slice(size_t r0, size_t r1) const;
  std::vector<uint32_t> row(size_t r) const;

  /// Block-diagonal composite.
  static Matrix block_diag(const Matrix& a, const Matrix& b);

  std::string key() const;  // canonical string, deterministic
  std::string pretty() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  uint32_t mod_ = 2;
  std::vector<uint32_t> e_;
};

}  // namespace stabex
