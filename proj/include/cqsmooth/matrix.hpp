#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <ostream>
#include <vector>

#include "cqsmooth/bigint.hpp"

namespace cqs {

/// Dense row-major matrix of exact integers.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntegerMatrix from_rows(
      const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.front().size() : 0;
    IntegerMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw InvalidInput("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const BigInt& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::vector<BigInt> column(std::size_t j) const {
    std::vector<BigInt> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  IntegerMatrix transpose() const {
    IntegerMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntegerMatrix operator*(const IntegerMatrix& a,
                                 const IntegerMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("matrix shape mismatch");
    IntegerMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const BigInt& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  /// Horizontal concatenation (A | B).
  IntegerMatrix hconcat(const IntegerMatrix& b) const {
    if (rows_ != b.rows_) throw InvalidInput("hconcat row mismatch");
    IntegerMatrix c(rows_, cols_ + b.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, cols_ + j) = b(i, j);
    }
    return c;
  }

  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

inline std::ostream& operator<<(std::ostream& os, const IntegerMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
    os << '\n';
  }
  return os;
}

/// The same matrix with its columns sorted lexicographically (descending).
inline IntegerMatrix sort_columns(const IntegerMatrix& m) {
  std::vector<std::vector<BigInt>> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
  std::sort(cols.begin(), cols.end(), std::greater<>());
  IntegerMatrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = cols[j][i];
  return out;
}

/// True iff b is a column permutation of a.
inline bool equal_up_to_column_permutation(const IntegerMatrix& a,
                                           const IntegerMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return sort_columns(a) == sort_columns(b);
}

/// M(x): diagonal x_i, entries -1 at |i - j| = 1.
template <typename Seq>
IntegerMatrix tridiagonal_matrix(const Seq& x) {
  const std::size_t n = x.size();
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = x[i];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = -1;
  }
  return m;
}

}  // namespace cqs
