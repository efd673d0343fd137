#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cotor/smith.hpp"

namespace cotor {

/// A finitely presented module: the cokernel of a relation matrix R (g x k).
///
/// Elements are columns of length g in generator coordinates. Over Z/n the
/// relations n*e_i are implicit and never stored.
class FpModule {
 public:
  FpModule() : FpModule(Ring::integers(), 0) {}
  FpModule(Ring ring, std::size_t gens) : ring_(ring), gens_(gens), rels_(ring, gens, 0) {}
  FpModule(Ring ring, std::size_t gens, Matrix rels) : ring_(ring), gens_(gens), rels_(rels.over(ring)) {
    if (rels_.rows() != gens_)
      throw DimensionMismatch("relation matrix has " + std::to_string(rels_.rows()) + " rows for " +
                              std::to_string(gens) + " generators");
  }

  static FpModule free(const Ring& r, std::size_t rank) { return FpModule(r, rank); }
  static FpModule zero(const Ring& r) { return FpModule(r, 0); }
  /// R / (d); d = 0 gives R itself.
  static FpModule cyclic(const Ring& r, const Int& d) {
    return FpModule(r, 1, Matrix::from_rows(r, std::vector<std::vector<Int>>{{d}}));
  }
  /// Cokernel of A: the module with relation matrix A.
  static FpModule cokernel_of(const Matrix& A) { return FpModule(A.ring(), A.rows(), A); }

  const Ring& ring() const { return ring_; }
  std::size_t gens() const { return gens_; }
  const Matrix& relations() const { return rels_; }

  /// Integer matrix whose column span is the full relation lattice (including n*e_i over Z/n).
  Matrix lattice() const { return detail::with_modulus(rels_); }

  std::string str() const { return "coker " + rels_.str() + " over " + ring_.name() + " gens " + std::to_string(gens_); }

  friend bool operator==(const FpModule& a, const FpModule& b) {
    return a.ring_ == b.ring_ && a.gens_ == b.gens_ && a.rels_ == b.rels_;
  }

 private:
  Ring ring_;
  std::size_t gens_;
  Matrix rels_;
};

namespace detail {

inline Matrix int_zero(std::size_t rows, std::size_t cols) { return Matrix(Ring::integers(), rows, cols); }

/// Every column of V lies in the Z-span of L.
inline bool in_lattice(const Matrix& L, const Matrix& V) {
  if (V.cols() == 0) return true;
  if (L.cols() == 0) return V.is_zero();
  for (auto& x : int_solve_columns(L.lifted(), V.lifted()))
    if (!x) return false;
  return true;
}

}  // namespace detail

/// Solves S C == V modulo the lattice L (columns in ambient coordinates).
inline std::optional<Matrix> express_in(const Matrix& S, const Matrix& L, const Matrix& V, const Ring& ring) {
  std::size_t k = S.cols();
  Matrix A = Matrix::hcat(S.lifted(), L.lifted());
  Matrix C(ring, k, V.cols());
  if (V.cols() == 0) return C;
  if (A.cols() == 0) {
    if (V.is_zero()) return C;
    return std::nullopt;
  }
  auto sols = detail::int_solve_columns(A, V.lifted());
  for (std::size_t j = 0; j < sols.size(); ++j) {
    if (!sols[j]) return std::nullopt;
    for (std::size_t i = 0; i < k; ++i) C.set(i, j, (*sols[j])[i]);
  }
  return C;
}

/// The module generated by the columns of S inside an ambient module with relation lattice L.
inline FpModule present(const Ring& ring, const Matrix& S, const Matrix& L) {
  std::size_t k = S.cols();
  Matrix A = Matrix::hcat(S.lifted(), L.lifted());
  Matrix K = detail::int_kernel(A).row_range(0, k).over(ring);
  Matrix rels = K.cols() ? span_basis(K) : K;
  return FpModule(ring, k, rels);
}

inline bool element_is_zero(const FpModule& M, const Matrix& v) { return detail::in_lattice(M.lattice(), v); }

/// Canonical decomposition M ~ (+) R/(d_i) with d_i non-units in divisibility order.
///
/// `to` and `from` are the mutually inverse isomorphisms (as generator matrices).
/// Over Z a free summand has d = 0; over Z/n it has d = n.
struct Simplified {
  FpModule module;
  std::vector<Int> invariants;
  Matrix to;    // simplified.gens x M.gens
  Matrix from;  // M.gens x simplified.gens
};

inline Simplified simplify(const FpModule& M) {
  const Ring& r = M.ring();
  std::size_t g = M.gens();
  Matrix L = M.lattice();
  detail::IntSmith s(L, true, true, false);
  std::vector<std::size_t> keep;
  std::vector<Int> inv;
  for (std::size_t i = 0; i < g; ++i) {
    Int d = i < s.rank ? s.a[i][i] : Int(0);
    if (d == 1) continue;
    keep.push_back(i);
    inv.push_back(d);
  }
  Matrix rels(r, keep.size(), 0);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const Int& d = inv[k];
    if (d == 0 || (r.is_finite() && d == r.modulus())) continue;
    Matrix c(r, keep.size(), 1);
    c.set(k, 0, d);
    rels = Matrix::hcat(rels, c);
  }
  Matrix to = s.U().select_rows(keep).over(r);
  Matrix from = s.Uinv().select_cols(keep).over(r);
  return {FpModule(r, keep.size(), rels), inv, to, from};
}

inline std::vector<Int> invariant_factors(const FpModule& M) { return simplify(M).invariants; }

inline bool is_zero(const FpModule& M) {
  if (M.gens() == 0) return true;
  return detail::in_lattice(M.lattice(), Matrix::identity(Ring::integers(), M.gens()));
}

inline bool isomorphic(const FpModule& a, const FpModule& b) {
  return a.ring() == b.ring() && invariant_factors(a) == invariant_factors(b);
}

/// Number of elements; 0 means infinite.
inline Int cardinality(const FpModule& M) {
  Int n = 1;
  for (auto& d : invariant_factors(M)) {
    if (d == 0) return 0;
    n *= d;
  }
  return n;
}

/// Human-readable decomposition such as "Z/2 + Z" or "0".
inline std::string describe(const FpModule& M) {
  auto inv = invariant_factors(M);
  if (inv.empty()) return "0";
  std::string out;
  const Ring& r = M.ring();
  for (std::size_t i = 0; i < inv.size(); ++i) {
    if (i) out += " + ";
    const Int& d = inv[i];
    if (d == 0) out += "Z";
    else if (r.kind() == RingKind::PrimeField) out += "F" + to_string(d);
    else out += "Z/" + to_string(d);
  }
  return out;
}

inline FpModule direct_sum(const FpModule& a, const FpModule& b) {
  require_same_ring(a.ring(), b.ring(), "direct_sum");
  return FpModule(a.ring(), a.gens() + b.gens(), Matrix::block_diag(a.relations(), b.relations()));
}

inline FpModule power(const FpModule& a, std::size_t n) {
  FpModule out = FpModule::zero(a.ring());
  for (std::size_t i = 0; i < n; ++i) out = direct_sum(out, a);
  return out;
}

/// All elements of a finite module, as columns in generator coordinates, in a fixed order.
inline std::vector<Matrix> elements(const FpModule& M) {
  if (!M.ring().is_finite()) throw UnsupportedRing("elements: module over Z is infinite");
  Simplified s = simplify(M);
  std::vector<Matrix> out;
  std::vector<Int> digits(s.invariants.size(), 0);
  for (;;) {
    Matrix v(M.ring(), s.module.gens(), 1);
    for (std::size_t i = 0; i < digits.size(); ++i) v.set(i, 0, digits[i]);
    out.push_back(s.from * v);
    std::size_t k = 0;
    while (k < digits.size()) {
      digits[k] += 1;
      if (digits[k] < s.invariants[k]) break;
      digits[k] = 0;
      ++k;
    }
    if (k == digits.size()) break;
  }
  return out;
}

/// A homomorphism given by its matrix in generator coordinates (target.gens x source.gens).
class ModuleMap {
 public:
  ModuleMap() = default;
  ModuleMap(FpModule source, FpModule target, Matrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(matrix.over(source_.ring())) {
    require_same_ring(source_.ring(), target_.ring(), "ModuleMap");
    if (matrix_.rows() != target_.gens() || matrix_.cols() != source_.gens())
      throw DimensionMismatch("map matrix " + matrix_.shape() + " for " + std::to_string(source_.gens()) + " -> " +
                              std::to_string(target_.gens()) + " generators");
    if (!detail::in_lattice(target_.lattice(), matrix_.lifted() * source_.relations().lifted()))
      throw ValidationError("map does not carry source relations into target relations");
  }

  static ModuleMap identity(const FpModule& M) { return {M, M, Matrix::identity(M.ring(), M.gens())}; }
  static ModuleMap zero(const FpModule& a, const FpModule& b) { return {a, b, Matrix(a.ring(), b.gens(), a.gens())}; }

  const FpModule& source() const { return source_; }
  const FpModule& target() const { return target_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  FpModule source_, target_;
  Matrix matrix_;
};

inline ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  if (!(f.target() == g.source())) throw PreconditionFailed("compose: target/source mismatch");
  return {f.source(), g.target(), g.matrix() * f.matrix()};
}

/// Equality of maps as homomorphisms (matrices may differ by target relations).
inline bool maps_equal(const ModuleMap& f, const ModuleMap& g) {
  return f.matrix().rows() == g.matrix().rows() && f.matrix().cols() == g.matrix().cols() &&
         detail::in_lattice(f.target().lattice(), (f.matrix() - g.matrix()).lifted());
}

inline bool is_zero_map(const ModuleMap& f) { return detail::in_lattice(f.target().lattice(), f.matrix().lifted()); }

/// Generators (in source coordinates) of ker f.
inline Matrix kernel_generators(const ModuleMap& f) {
  std::size_t g = f.source().gens();
  Matrix A = Matrix::hcat(f.matrix().lifted(), f.target().lattice());
  Matrix K = detail::int_kernel(A).row_range(0, g).over(f.source().ring());
  return K.cols() ? span_basis(K) : K;
}

inline bool is_mono(const ModuleMap& f) { return detail::in_lattice(f.source().lattice(), kernel_generators(f).lifted()); }

inline bool is_epi(const ModuleMap& f) {
  std::size_t g = f.target().gens();
  if (g == 0) return true;
  return detail::in_lattice(Matrix::hcat(f.matrix().lifted(), f.target().lattice()), Matrix::identity(Ring::integers(), g));
}

inline bool is_iso(const ModuleMap& f) { return is_mono(f) && is_epi(f); }

/// Inclusion of a submodule generated by columns S of an ambient module.
inline ModuleMap submodule_inclusion(const FpModule& ambient, const Matrix& S) {
  FpModule sub = present(ambient.ring(), S, ambient.lattice());
  return {sub, ambient, S};
}

inline ModuleMap kernel(const ModuleMap& f) { return submodule_inclusion(f.source(), kernel_generators(f)); }

inline ModuleMap image_inclusion(const ModuleMap& f) { return submodule_inclusion(f.target(), f.matrix()); }

/// Quotient of M by the submodule generated by S, with the projection.
inline ModuleMap quotient(const FpModule& M, const Matrix& S) {
  Matrix rels = Matrix::hcat(M.relations(), S.over(M.ring()));
  FpModule Q(M.ring(), M.gens(), rels.cols() ? span_basis(rels) : rels);
  return {M, Q, Matrix::identity(M.ring(), M.gens())};
}

inline ModuleMap cokernel(const ModuleMap& f) { return quotient(f.target(), f.matrix()); }

struct MapFactorization {
  ModuleMap kernel;    // ker f -> source
  FpModule image;
  ModuleMap cokernel;  // target -> coker f
};

/// Kernel, image and cokernel of f; exactness of ker -> source -> image is verified.
inline MapFactorization map_factorization(const ModuleMap& f) {
  ModuleMap k = kernel(f);
  ModuleMap c = cokernel(f);
  FpModule im = image_inclusion(f).source();
  ModuleMap coim(f.source(), im, Matrix::identity(f.source().ring(), f.source().gens()));
  ensure(is_epi(coim), "source -> image not epi");
  ensure(is_zero_map(compose(coim, k)), "kernel does not die in the image");
  ensure(detail::in_lattice(Matrix::hcat(k.matrix().lifted(), f.source().lattice()),
                            kernel_generators(coim).lifted()),
         "kernel of source -> image exceeds ker f");
  ensure(is_mono(k) && is_epi(c), "kernel/cokernel maps have wrong shape");
  return {k, im, c};
}

/// Section of an epimorphism-like map: s with f s == id modulo target relations, if one exists.
inline std::optional<ModuleMap> find_section(const ModuleMap& f) {
  LinearSystem sys(f.source().ring());
  const FpModule& T = f.target();
  const FpModule& S = f.source();
  auto x = sys.add_unknown(S.gens(), T.gens());
  sys.add_constraint({{Matrix::identity(S.ring(), S.gens()), x, T.relations()}}, Matrix(S.ring(), S.gens(), T.relations().cols()),
                     S.lattice());
  sys.add_constraint({{f.matrix(), x, Matrix::identity(S.ring(), T.gens())}}, Matrix::identity(S.ring(), T.gens()), T.lattice());
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  return ModuleMap(T, S, (*sol)[0]);
}

inline ModuleMap direct_sum_maps(const ModuleMap& f, const ModuleMap& g) {
  return {direct_sum(f.source(), g.source()), direct_sum(f.target(), g.target()),
          Matrix::block_diag(f.matrix(), g.matrix())};
}

/// Hom(M, N) as a module together with the maps its generators stand for.
struct HomModule {
  FpModule module;
  std::vector<ModuleMap> generators;
};

inline HomModule hom(const FpModule& M, const FpModule& N) {
  require_same_ring(M.ring(), N.ring(), "hom");
  LinearSystem sys(M.ring());
  auto x = sys.add_unknown(N.gens(), M.gens());
  sys.add_constraint({{Matrix::identity(M.ring(), N.gens()), x, M.relations()}}, Matrix(M.ring(), N.gens(), M.relations().cols()),
                     N.lattice());
  std::vector<ModuleMap> gens;
  FpModule NM = power(N, M.gens());
  Matrix S(M.ring(), N.gens() * M.gens(), 0);
  for (auto& sol : sys.kernel_generators()) {
    ModuleMap phi(M, N, sol[0]);
    if (is_zero_map(phi)) continue;
    gens.push_back(phi);
    Matrix v(M.ring(), N.gens() * M.gens(), 1);
    for (std::size_t j = 0; j < M.gens(); ++j)
      for (std::size_t i = 0; i < N.gens(); ++i) v.set(j * N.gens() + i, 0, sol[0](i, j));
    S = Matrix::hcat(S, v);
  }
  return {present(M.ring(), S, NM.lattice()), gens};
}

}  // namespace cotor

namespace cotor {

/// The module with relation matrix A; its invariant factors come from simplify().
inline FpModule cokernel_presentation(const Matrix& A) { return FpModule::cokernel_of(A); }

}  // namespace cotor
