#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cotor/matrix.hpp"

namespace cotor {

/// U * A * V = D with U, V invertible and D diagonal, d_1 | d_2 | ...
struct SmithForm {
  Matrix U;
  Matrix D;
  Matrix V;
  std::size_t rank = 0;

  std::vector<Int> diagonal() const {
    std::vector<Int> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

using IntRows = std::vector<std::vector<Int>>;

inline IntRows to_rows(const Matrix& m) {
  IntRows r(m.rows(), std::vector<Int>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

inline Matrix from_int_rows(const IntRows& r, std::size_t rows, std::size_t cols) {
  Matrix m(Ring::integers(), rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, r[i][j]);
  return m;
}

inline IntRows identity_rows(std::size_t n) {
  IntRows r(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
  return r;
}

/// Smith normal form over Z together with the transforms.
///
/// Pivot rule: the nonzero entry of smallest absolute value in the active
/// block, ties broken by row-major order. Uinv is maintained alongside U so
/// callers can recover the column span without inverting.
struct IntSmith {
  IntRows a;
  IntRows u, uinv, v;
  std::size_t rows = 0, cols = 0, rank = 0;
  bool track_u, track_uinv, track_v;

  IntSmith(const Matrix& m, bool want_u, bool want_uinv, bool want_v)
      : a(to_rows(m.lifted())), rows(m.rows()), cols(m.cols()),
        track_u(want_u), track_uinv(want_uinv), track_v(want_v) {
    if (track_u) u = identity_rows(rows);
    if (track_uinv) uinv = identity_rows(rows);
    if (track_v) v = identity_rows(cols);
    run();
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    if (track_u) std::swap(u[i], u[j]);
    if (track_uinv)
      for (auto& row : uinv) std::swap(row[i], row[j]);
  }
  // row_i += q * row_j
  void add_row(std::size_t i, std::size_t j, const Int& q) {
    for (std::size_t k = 0; k < cols; ++k)
      if (a[j][k] != 0) a[i][k] += q * a[j][k];
    if (track_u)
      for (std::size_t k = 0; k < rows; ++k)
        if (u[j][k] != 0) u[i][k] += q * u[j][k];
    if (track_uinv)
      for (auto& row : uinv)
        if (row[i] != 0) row[j] -= q * row[i];
  }
  void neg_row(std::size_t i) {
    for (auto& x : a[i]) x = -x;
    if (track_u)
      for (auto& x : u[i]) x = -x;
    if (track_uinv)
      for (auto& row : uinv) row[i] = -row[i];
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : a) std::swap(row[i], row[j]);
    if (track_v)
      for (auto& row : v) std::swap(row[i], row[j]);
  }
  // col_i += q * col_j
  void add_col(std::size_t i, std::size_t j, const Int& q) {
    for (auto& row : a)
      if (row[j] != 0) row[i] += q * row[j];
    if (track_v)
      for (auto& row : v)
        if (row[j] != 0) row[i] += q * row[j];
  }

  bool pick_pivot(std::size_t t) {
    bool found = false;
    Int best;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (a[i][j] == 0) continue;
        Int av = abs_int(a[i][j]);
        if (!found || av < best) {
          found = true;
          best = av;
          bi = i;
          bj = j;
        }
      }
    if (!found) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  // Re-pivot within row t and column t only.
  void local_pivot(std::size_t t) {
    Int best = abs_int(a[t][t]);
    std::size_t bi = t, bj = t;
    bool have = a[t][t] != 0;
    for (std::size_t i = t + 1; i < rows; ++i)
      if (a[i][t] != 0 && (!have || abs_int(a[i][t]) < best)) {
        have = true;
        best = abs_int(a[i][t]);
        bi = i;
        bj = t;
      }
    for (std::size_t j = t + 1; j < cols; ++j)
      if (a[t][j] != 0 && (!have || abs_int(a[t][j]) < best)) {
        have = true;
        best = abs_int(a[t][j]);
        bi = t;
        bj = j;
      }
    swap_rows(t, bi);
    swap_cols(t, bj);
  }

  void run() {
    std::size_t t = 0;
    std::size_t lim = std::min(rows, cols);
    while (t < lim) {
      if (!pick_pivot(t)) break;
      for (;;) {
        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
          if (a[i][t] == 0) continue;
          Int q = a[i][t] / a[t][t];
          if (q != 0) add_row(i, t, -q);
          if (a[i][t] != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (a[t][j] == 0) continue;
          Int q = a[t][j] / a[t][t];
          if (q != 0) add_col(j, t, -q);
          if (a[t][j] != 0) clean = false;
        }
        if (!clean) {
          local_pivot(t);
          continue;
        }
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (a[i][j] % a[t][t] != 0) {
              add_row(t, i, 1);
              divides = false;
              break;
            }
        if (divides) break;
      }
      if (a[t][t] < 0) neg_row(t);
      ++t;
    }
    rank = t;
  }

  Matrix U() const { return from_int_rows(u, rows, rows); }
  Matrix Uinv() const { return from_int_rows(uinv, rows, rows); }
  Matrix V() const { return from_int_rows(v, cols, cols); }
  Matrix D() const { return from_int_rows(a, rows, cols); }
};

/// Solves A x = b over Z for each column of B. Entry k is empty when column k is unsolvable.
inline std::vector<std::optional<std::vector<Int>>> int_solve_columns(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows()) throw DimensionMismatch("solve: A is " + A.shape() + ", b is " + B.shape());
  IntSmith s(A, true, false, true);
  std::vector<std::optional<std::vector<Int>>> out;
  IntRows b = to_rows(B.lifted());
  for (std::size_t k = 0; k < B.cols(); ++k) {
    std::vector<Int> y(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < A.rows(); ++j)
        if (s.u[i][j] != 0 && b[j][k] != 0) y[i] += s.u[i][j] * b[j][k];
    bool ok = true;
    std::vector<Int> z(A.cols());
    for (std::size_t i = 0; i < A.rows() && ok; ++i) {
      if (i < s.rank) {
        if (y[i] % s.a[i][i] != 0) ok = false;
        else z[i] = y[i] / s.a[i][i];
      } else if (y[i] != 0) {
        ok = false;
      }
    }
    if (!ok) {
      out.emplace_back(std::nullopt);
      continue;
    }
    std::vector<Int> x(A.cols());
    for (std::size_t i = 0; i < A.cols(); ++i)
      for (std::size_t j = 0; j < s.rank; ++j)
        if (s.v[i][j] != 0 && z[j] != 0) x[i] += s.v[i][j] * z[j];
    out.emplace_back(std::move(x));
  }
  return out;
}

inline std::optional<std::vector<Int>> int_solve(const Matrix& A, const std::vector<Int>& b) {
  return int_solve_columns(A, Matrix::column(Ring::integers(), b))[0];
}

/// Lattice basis of {x in Z^n : A x = 0}, as columns.
inline Matrix int_kernel(const Matrix& A) {
  IntSmith s(A, false, false, true);
  std::vector<std::size_t> idx;
  for (std::size_t j = s.rank; j < A.cols(); ++j) idx.push_back(j);
  return s.V().select_cols(idx);
}

/// Lattice basis of the column span of S (over Z).
inline Matrix int_span_basis(const Matrix& S) {
  IntSmith s(S, false, true, false);
  Matrix out(Ring::integers(), S.rows(), s.rank);
  for (std::size_t j = 0; j < s.rank; ++j)
    for (std::size_t i = 0; i < S.rows(); ++i) out.set(i, j, s.uinv[i][j] * s.a[j][j]);
  return out;
}

/// [A | n I] over Z when the ring is Z/n; A lifted otherwise.
inline Matrix with_modulus(const Matrix& A) {
  Matrix L = A.lifted();
  if (!A.ring().is_finite()) return L;
  return Matrix::hcat(L, Matrix::identity(Ring::integers(), A.rows()).scaled(A.ring().modulus()));
}

}  // namespace detail

/// Smith normal form over the matrix's ring. Z/n and F_p inputs are lifted to Z,
/// reduced over Z and the transforms reduced back, so U A V = D holds in the ring.
inline SmithForm snf(const Matrix& A) {
  detail::IntSmith s(A, true, false, true);
  const Ring& r = A.ring();
  SmithForm f{s.U().over(r), s.D().over(r), s.V().over(r), s.rank};
  if (r.is_finite()) {
    f.rank = 0;
    for (auto& d : f.diagonal())
      if (d != 0) ++f.rank;
  }
  return f;
}

/// Column span basis over the ring: a lattice basis over Z, a small generating set over Z/n.
inline Matrix span_basis(const Matrix& S) {
  const Ring& r = S.ring();
  if (!r.is_finite()) return detail::int_span_basis(S).over(r);
  Matrix B = detail::int_span_basis(detail::with_modulus(S)).over(r);
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < B.cols(); ++j)
    if (!B.col_matrix(j).is_zero()) keep.push_back(j);
  return B.select_cols(keep);
}

/// x with A x = b exactly, or nothing. Deterministic: the minimal solution in Smith coordinates.
inline std::optional<Matrix> solve_linear(const Matrix& A, const Matrix& b) {
  require_same_ring(A.ring(), b.ring(), "solve_linear");
  if (b.cols() != 1 || b.rows() != A.rows())
    throw DimensionMismatch("solve_linear: A is " + A.shape() + ", b is " + b.shape());
  auto x = detail::int_solve_columns(detail::with_modulus(A), b.lifted())[0];
  if (!x) return std::nullopt;
  x->resize(A.cols());
  return Matrix::column(A.ring(), *x);
}

/// Columns generating {x : A x = 0}; a lattice basis over Z.
inline Matrix kernel_basis(const Matrix& A) {
  const Ring& r = A.ring();
  if (!r.is_finite()) return detail::int_kernel(A);
  Matrix K = detail::int_kernel(detail::with_modulus(A)).row_range(0, A.cols()).over(r);
  return span_basis(K);
}

/// Builder for linear systems whose unknowns are matrices.
///
/// A constraint reads  sum_k P_k X_k Q_k == T  modulo a lattice L applied
/// column-wise to the result (L already includes the ring modulus when the
/// caller wants it; use lattice_of helpers from module.hpp). Unknown matrices
/// are vectorized column-major. Everything is solved over Z.
class LinearSystem {
 public:
  struct Term {
    Matrix left;
    std::size_t var;
    Matrix right;
  };

  explicit LinearSystem(Ring ring) : ring_(std::move(ring)) {}

  std::size_t add_unknown(std::size_t rows, std::size_t cols) {
    vars_.push_back({rows, cols, var_total_});
    var_total_ += rows * cols;
    return vars_.size() - 1;
  }

  /// The zero-th term shapes the result; pass an empty lattice matrix (rows x 0) for exact equality.
  void add_constraint(const std::vector<Term>& terms, const Matrix& rhs, const Matrix& lattice) {
    std::size_t m = rhs.rows() * rhs.cols();
    if (lattice.rows() != rhs.rows()) throw DimensionMismatch("constraint lattice rows");
    Constraint c;
    c.rhs = vec(rhs.lifted());
    c.dim = m;
    for (auto& t : terms) {
      const Var& v = vars_.at(t.var);
      if (t.left.cols() != v.rows || t.right.rows() != v.cols || t.left.rows() != rhs.rows() ||
          t.right.cols() != rhs.cols())
        throw DimensionMismatch("constraint term shape");
      c.blocks.push_back({t.var, Matrix::kron(t.right.lifted().transpose(), t.left.lifted())});
    }
    if (lattice.cols() > 0) c.slack = Matrix::kron(Matrix::identity(Ring::integers(), rhs.cols()), lattice.lifted());
    else c.slack = Matrix(Ring::integers(), m, 0);
    constraints_.push_back(std::move(c));
  }

  std::size_t unknown_count() const { return vars_.size(); }

  std::optional<std::vector<Matrix>> solve() const {
    auto [A, b] = assemble();
    auto x = detail::int_solve(A, b);
    if (!x) return std::nullopt;
    return unpack(*x);
  }

  /// Generators of the homogeneous solution set projected onto the unknowns.
  std::vector<std::vector<Matrix>> kernel_generators() const {
    auto [A, b] = assemble();
    (void)b;
    Matrix K = detail::int_kernel(A).row_range(0, var_total_).over(ring_);
    if (ring_.is_finite()) K = span_basis(K);
    else if (K.cols() > 0) K = detail::int_span_basis(K);
    std::vector<std::vector<Matrix>> out;
    for (std::size_t j = 0; j < K.cols(); ++j) out.push_back(unpack(K.col(j)));
    return out;
  }

 private:
  struct Var {
    std::size_t rows, cols, offset;
  };
  struct Block {
    std::size_t var;
    Matrix coeff;
  };
  struct Constraint {
    std::vector<Block> blocks;
    Matrix slack;
    std::vector<Int> rhs;
    std::size_t dim = 0;
  };

  static std::vector<Int> vec(const Matrix& m) {
    std::vector<Int> v(m.rows() * m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) v[j * m.rows() + i] = m(i, j);
    return v;
  }

  std::pair<Matrix, std::vector<Int>> assemble() const {
    std::size_t rows = 0, slack = 0;
    for (auto& c : constraints_) {
      rows += c.dim;
      slack += c.slack.cols();
    }
    Matrix A(Ring::integers(), rows, var_total_ + slack);
    std::vector<Int> b(rows);
    std::size_t r0 = 0, s0 = var_total_;
    for (auto& c : constraints_) {
      for (auto& blk : c.blocks) {
        std::size_t off = vars_[blk.var].offset;
        for (std::size_t i = 0; i < blk.coeff.rows(); ++i)
          for (std::size_t j = 0; j < blk.coeff.cols(); ++j)
            if (blk.coeff(i, j) != 0) A.set(r0 + i, off + j, A(r0 + i, off + j) + blk.coeff(i, j));
      }
      for (std::size_t i = 0; i < c.slack.rows(); ++i)
        for (std::size_t j = 0; j < c.slack.cols(); ++j) A.set(r0 + i, s0 + j, -c.slack(i, j));
      for (std::size_t i = 0; i < c.dim; ++i) b[r0 + i] = c.rhs[i];
      r0 += c.dim;
      s0 += c.slack.cols();
    }
    return {A, b};
  }

  std::vector<Matrix> unpack(const std::vector<Int>& x) const {
    std::vector<Matrix> out;
    for (auto& v : vars_) {
      Matrix m(ring_, v.rows, v.cols);
      for (std::size_t j = 0; j < v.cols; ++j)
        for (std::size_t i = 0; i < v.rows; ++i) m.set(i, j, x[v.offset + j * v.rows + i]);
      out.push_back(std::move(m));
    }
    return out;
  }

  Ring ring_;
  std::vector<Var> vars_;
  std::size_t var_total_ = 0;
  std::vector<Constraint> constraints_;
};

}  // namespace cotor
