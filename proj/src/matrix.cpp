#include "stabex/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace stabex {

Matrix::Matrix(size_t rows, size_t cols, uint32_t mod, std::vector<int64_t> entries)
    : rows_(rows), cols_(cols), mod_(mod) {
  if (entries.size() != rows * cols) throw std::invalid_argument("Matrix: entry count mismatch");
  RingSpec r(mod);
  e_.reserve(entries.size());
  for (int64_t x : entries) e_.push_back(r.reduce(x));
}

Matrix Matrix::identity(size_t n, uint32_t mod) {
  Matrix m(n, n, mod);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1 % mod;
  return m;
}

bool Matrix::is_zero() const {
  for (uint32_t x : e_)
    if (x) return false;
  return true;
}

Matrix Matrix::mul(const Matrix& rhs) const {
  if (cols_ != rhs.rows_ || mod_ != rhs.mod_) throw std::invalid_argument("Matrix::mul: shape/mod mismatch");
  Matrix out(rows_, rhs.cols_, mod_);
  const size_t n = rhs.cols_;
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t k = 0; k < cols_; ++k) {
      uint64_t a = e_[i * cols_ + k];
      if (!a) continue;
      const uint32_t* rrow = rhs.e_.data() + k * n;
      uint32_t* orow = out.e_.data() + i * n;
      for (size_t j = 0; j < n; ++j) orow[j] = static_cast<uint32_t>((orow[j] + a * rrow[j]) % mod_);
    }
  }
  return out;
}

Matrix Matrix::add(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || mod_ != rhs.mod_)
    throw std::invalid_argument("Matrix::add: shape/mod mismatch");
  Matrix out(rows_, cols_, mod_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = (e_[i] + rhs.e_[i]) % mod_;
  return out;
}

Matrix Matrix::sub(const Matrix& rhs) const { return add(rhs.neg()); }

Matrix Matrix::neg() const {
  Matrix out(rows_, cols_, mod_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] ? mod_ - e_[i] : 0;
  return out;
}

Matrix Matrix::scale(uint32_t c) const {
  Matrix out(rows_, cols_, mod_);
  for (size_t i = 0; i < e_.size(); ++i)
    out.e_[i] = static_cast<uint32_t>((static_cast<uint64_t>(e_[i]) * c) % mod_);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_, mod_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

Matrix Matrix::hstack(const Matrix& right) const {
  if (rows_ != right.rows_ || mod_ != right.mod_) throw std::invalid_argument("hstack: mismatch");
  Matrix out(rows_, cols_ + right.cols_, mod_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
    for (size_t j = 0; j < right.cols_; ++j) out.at(i, cols_ + j) = right.at(i, j);
  }
  return out;
}

Matrix Matrix::vstack(const Matrix& below) const {
  if (cols_ != below.cols_ || mod_ != below.mod_) throw std::invalid_argument("vstack: mismatch");
  Matrix out(rows_ + below.rows_, cols_, mod_);
  for (size_t i = 0; i < rows_ * cols_; ++i) out.e_[i] = e_[i];
  for (size_t i = 0; i < below.rows_ * cols_; ++i) out.e_[rows_ * cols_ + i] = below.e_[i];
  return out;
}

Matrix Matrix::col_slice(size_t c0, size_t c1) const {
  Matrix out(rows_, c1 - c0, mod_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = c0; j < c1; ++j) out.at(i, j - c0) = at(i, j);
  return out;
}

Matrix Matrix::row_slice(size_t r0, size_t r1) const {
  Matrix out(r1 - r0, cols_, mod_);
  for (size_t i = r0; i < r1; ++i)
    for (size_t j = 0; j < cols_; ++j) out.at(i - r0, j) = at(i, j);
  return out;
}

std::vector<uint32_t> Matrix::row(size_t r) const {
  return std::vector<uint32_t>(e_.begin() + r * cols_, e_.begin() + (r + 1) * cols_);
}

Matrix Matrix::block_diag(const Matrix& a, const Matrix& b) {
  if (a.mod() != b.mod()) throw std::invalid_argument("block_diag: mod mismatch");
  Matrix out(a.rows() + b.rows(), a.cols() + b.cols(), a.mod());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) out.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return out;
}

std::string Matrix::key() const {
  std::string s;
  s.reserve(e_.size() * 2 + 16);
  s += std::to_string(rows_);
  s += 'x';
  s += std::to_string(cols_);
  s += ':';
  for (uint32_t x : e_) {
    s += std::to_string(x);
    s += ',';
  }
  return s;
}

std::string Matrix::pretty() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < rows_; ++i) {
    os << "[";
    for (size_t j = 0; j < cols_; ++j) os << at(i, j) << (j + 1 < cols_ ? "," : "");
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace stabex
