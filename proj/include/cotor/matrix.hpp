#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cotor/ring.hpp"

namespace cotor {

/// Dense matrix over a Ring with normalized entries, stored row-major.
class Matrix {
 public:
  Matrix() : ring_(Ring::integers()) {}
  Matrix(Ring ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix zero(const Ring& r, std::size_t rows, std::size_t cols) { return Matrix(r, rows, cols); }

  static Matrix identity(const Ring& r, std::size_t n) {
    Matrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  static Matrix from_rows(const Ring& r, const std::vector<std::vector<Int>>& rows) {
    std::size_t nr = rows.size();
    std::size_t nc = nr ? rows[0].size() : 0;
    Matrix m(r, nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
      if (rows[i].size() != nc) throw DimensionMismatch("ragged matrix rows");
      for (std::size_t j = 0; j < nc; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  static Matrix from_rows(const Ring& r, std::initializer_list<std::initializer_list<long long>> rows) {
    std::vector<std::vector<Int>> v;
    for (auto& row : rows) {
      v.emplace_back();
      for (long long x : row) v.back().push_back(Int(x));
    }
    return from_rows(r, v);
  }

  static Matrix column(const Ring& r, const std::vector<Int>& v) {
    Matrix m(r, v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i]);
    return m;
  }

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, const Int& v) { data_[i * cols_ + j] = ring_.normalize(v); }

  /// Same entries reinterpreted over another ring (normalizing on the way).
  Matrix over(const Ring& r) const {
    Matrix m(r, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = r.normalize(data_[k]);
    return m;
  }
  /// Lift to Z with identical entries.
  Matrix lifted() const { return over(Ring::integers()); }

  bool is_zero() const {
    for (auto& x : data_)
      if (x != 0) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = (*this)(i, j);
    return t;
  }

  std::vector<Int> col(std::size_t j) const {
    std::vector<Int> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Matrix col_matrix(std::size_t j) const { return select_cols({j}); }

  Matrix select_cols(const std::vector<std::size_t>& idx) const {
    Matrix m(ring_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) m.data_[i * idx.size() + k] = (*this)(i, idx[k]);
    return m;
  }

  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(ring_, idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t j = 0; j < cols_; ++j) m.data_[k * cols_ + j] = (*this)(idx[k], j);
    return m;
  }

  Matrix row_range(std::size_t begin, std::size_t end) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = begin; i < end; ++i) idx.push_back(i);
    return select_rows(idx);
  }

  Matrix col_range(std::size_t begin, std::size_t end) const {
    std::vector<std::size_t> idx;
    for (std::size_t j = begin; j < end; ++j) idx.push_back(j);
    return select_cols(idx);
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("matrix product " + a.shape() + " * " + b.shape());
    Matrix c(a.ring_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Int& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Int& bkj = b(k, j);
          if (bkj != 0) c.data_[i * c.cols_ + j] += aik * bkj;
        }
      }
    c.renormalize();
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "+");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    c.renormalize();
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "-");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    c.renormalize();
    return c;
  }

  Matrix operator-() const {
    Matrix c = *this;
    for (auto& x : c.data_) x = -x;
    c.renormalize();
    return c;
  }

  Matrix scaled(const Int& s) const {
    Matrix c = *this;
    for (auto& x : c.data_) x *= s;
    c.renormalize();
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// [A | B]
  static Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) throw DimensionMismatch("hcat " + a.shape() + " | " + b.shape());
    Matrix c(a.ring_, a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) c.data_[i * c.cols_ + j] = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) c.data_[i * c.cols_ + a.cols_ + j] = a.ring_.normalize(b(i, j));
    }
    return c;
  }

  static Matrix hcat(const std::vector<Matrix>& parts, const Ring& r, std::size_t rows) {
    Matrix out(r, rows, 0);
    for (auto& p : parts) out = hcat(out, p);
    return out;
  }

  /// [A ; B]
  static Matrix vcat(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.cols_) throw DimensionMismatch("vcat " + a.shape() + " ; " + b.shape());
    Matrix c(a.ring_, a.rows_ + b.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) c.data_[k] = a.data_[k];
    for (std::size_t k = 0; k < b.data_.size(); ++k) c.data_[a.data_.size() + k] = a.ring_.normalize(b.data_[k]);
    return c;
  }

  static Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix c(a.ring_, a.rows_ + b.rows_, a.cols_ + b.cols_);
    c.paste(0, 0, a);
    c.paste(a.rows_, a.cols_, b);
    return c;
  }

  /// Kronecker product A (x) B; entry (i*rb + k, j*cb + l) = a_ij * b_kl.
  static Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.ring_, a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) {
        const Int& x = a(i, j);
        if (x == 0) continue;
        for (std::size_t k = 0; k < b.rows_; ++k)
          for (std::size_t l = 0; l < b.cols_; ++l)
            c.set(i * b.rows_ + k, j * b.cols_ + l, x * b(k, l));
      }
    return c;
  }

  void paste(std::size_t r0, std::size_t c0, const Matrix& m) {
    if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw DimensionMismatch("paste out of range");
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) set(r0 + i, c0 + j, m(i, j));
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  /// Nested-list rendering, e.g. [[1,2],[3,4]]; a 0-row matrix prints as [].
  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) os << ',';
      os << '[';
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << ',';
        os << (*this)(i, j);
      }
      os << ']';
    }
    os << ']';
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) { return os << m.str(); }

 private:
  void renormalize() {
    if (ring_.is_finite())
      for (auto& x : data_) x = ring_.normalize(x);
  }
  void require_same_shape(const Matrix& b, const char* op) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionMismatch(std::string("matrix ") + op + " shape mismatch");
  }

  Ring ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

}  // namespace cotor
