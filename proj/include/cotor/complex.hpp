#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cotor/homological.hpp"

namespace cotor {

/// A bounded chain complex ... -> X_n -d_n-> X_{n-1} -> ... supported on [lo, hi].
///
/// Zero objects at either end are trimmed on construction, so two complexes
/// with the same nonzero part have the same support.
class ChainComplex {
 public:
  ChainComplex() : ring_(Ring::integers()) {}
  explicit ChainComplex(Ring r) : ring_(std::move(r)) {}

  /// diffs[k] is d_{lo+k+1} : X_{lo+k+1} -> X_{lo+k}.
  ChainComplex(Ring r, int lo, std::vector<FpModule> objects, std::vector<Matrix> diffs)
      : ring_(std::move(r)), lo_(lo), objs_(std::move(objects)), diffs_(std::move(diffs)) {
    std::size_t want = objs_.empty() ? 0 : objs_.size() - 1;
    if (diffs_.size() != want)
      throw DimensionMismatch("complex with " + std::to_string(objs_.size()) + " objects needs " + std::to_string(want) +
                              " differentials");
    for (auto& m : objs_) require_same_ring(ring_, m.ring(), "ChainComplex");
    for (auto& d : diffs_) d = d.over(ring_);
    for (int n = lo_ + 1; n <= hi(); ++n) (void)dmap(n);  // validates shapes and relations
    for (int n = lo_ + 2; n <= hi(); ++n)
      if (!is_zero_map(compose(dmap(n - 1), dmap(n))))
        throw ValidationError("d_" + std::to_string(n - 1) + " d_" + std::to_string(n) + " != 0");
    trim();
  }

  const Ring& ring() const { return ring_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(objs_.size()) - 1; }
  bool empty() const { return objs_.empty(); }

  FpModule obj(int n) const {
    if (n < lo_ || n > hi()) return FpModule::zero(ring_);
    return objs_[n - lo_];
  }
  /// Matrix of d_n : X_n -> X_{n-1}.
  Matrix d(int n) const {
    if (n <= lo_ || n > hi()) return Matrix(ring_, obj(n - 1).gens(), obj(n).gens());
    return diffs_[n - lo_ - 1];
  }
  ModuleMap dmap(int n) const { return ModuleMap(obj(n), obj(n - 1), d(n)); }

  std::string str() const {
    std::string s = "complex over " + ring_.name();
    for (int n = hi(); n >= lo_; --n) s += " | " + std::to_string(n) + ": " + describe(obj(n));
    return s;
  }

  friend bool operator==(const ChainComplex& a, const ChainComplex& b) {
    return a.ring_ == b.ring_ && a.lo_ == b.lo_ && a.objs_ == b.objs_ && a.diffs_ == b.diffs_;
  }

 private:
  void trim() {
    while (!objs_.empty() && is_zero(objs_.back())) {
      objs_.pop_back();
      if (!diffs_.empty()) diffs_.pop_back();
    }
    while (!objs_.empty() && is_zero(objs_.front())) {
      objs_.erase(objs_.begin());
      if (!diffs_.empty()) diffs_.erase(diffs_.begin());
      ++lo_;
    }
    if (objs_.empty()) lo_ = 0;
  }

  Ring ring_;
  int lo_ = 0;
  std::vector<FpModule> objs_;
  std::vector<Matrix> diffs_;
};

/// Degree range covering both supports; empty complexes contribute nothing.
inline std::pair<int, int> joint_range(const ChainComplex& a, const ChainComplex& b) {
  if (a.empty() && b.empty()) return {0, -1};
  if (a.empty()) return {b.lo(), b.hi()};
  if (b.empty()) return {a.lo(), a.hi()};
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

/// A family of module maps f_n : X_n -> Y_n commuting with the differentials.
class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(ChainComplex source, ChainComplex target, std::map<int, Matrix> components)
      : src_(std::move(source)), tgt_(std::move(target)) {
    require_same_ring(src_.ring(), tgt_.ring(), "ChainMap");
    for (auto& [n, m] : components) {
      if (src_.obj(n).gens() == 0 || tgt_.obj(n).gens() == 0) continue;
      comps_[n] = m.over(src_.ring());
      (void)at(n);
    }
    auto [lo, hi] = joint_range(src_, tgt_);
    for (int n = lo; n <= hi + 1; ++n)
      if (!maps_equal(compose(tgt_.dmap(n), at(n)), compose(at(n - 1), src_.dmap(n))))
        throw ValidationError("chain map does not commute with d in degree " + std::to_string(n));
  }

  static ChainMap identity(const ChainComplex& X) {
    std::map<int, Matrix> c;
    for (int n = X.lo(); n <= X.hi(); ++n) c[n] = Matrix::identity(X.ring(), X.obj(n).gens());
    return {X, X, c};
  }
  static ChainMap zero(const ChainComplex& X, const ChainComplex& Y) { return {X, Y, {}}; }

  const ChainComplex& source() const { return src_; }
  const ChainComplex& target() const { return tgt_; }
  Matrix matrix(int n) const {
    auto it = comps_.find(n);
    if (it != comps_.end()) return it->second;
    return Matrix(src_.ring(), tgt_.obj(n).gens(), src_.obj(n).gens());
  }
  ModuleMap at(int n) const { return ModuleMap(src_.obj(n), tgt_.obj(n), matrix(n)); }
  const std::map<int, Matrix>& components() const { return comps_; }

 private:
  ChainComplex src_, tgt_;
  std::map<int, Matrix> comps_;
};

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
  if (!(f.target() == g.source())) throw PreconditionFailed("compose: chain map target/source mismatch");
  std::map<int, Matrix> c;
  for (int n = f.source().lo(); n <= f.source().hi(); ++n) c[n] = g.matrix(n) * f.matrix(n);
  return {f.source(), g.target(), c};
}

inline bool maps_equal(const ChainMap& f, const ChainMap& g) {
  if (!(f.source() == g.source() && f.target() == g.target())) return false;
  for (int n = f.source().lo(); n <= f.source().hi(); ++n)
    if (!maps_equal(f.at(n), g.at(n))) return false;
  return true;
}

inline bool is_zero_map(const ChainMap& f) {
  for (int n = f.source().lo(); n <= f.source().hi(); ++n)
    if (!is_zero_map(f.at(n))) return false;
  return true;
}

inline ChainMap subtract(const ChainMap& f, const ChainMap& g) {
  std::map<int, Matrix> c;
  for (int n = f.source().lo(); n <= f.source().hi(); ++n) c[n] = f.matrix(n) - g.matrix(n);
  return {f.source(), f.target(), c};
}

inline bool is_mono(const ChainMap& f) {
  for (int n = f.source().lo(); n <= f.source().hi(); ++n)
    if (!is_mono(f.at(n))) return false;
  return true;
}

inline bool is_epi(const ChainMap& f) {
  for (int n = f.target().lo(); n <= f.target().hi(); ++n)
    if (!is_epi(f.at(n))) return false;
  return true;
}

inline bool is_iso(const ChainMap& f) { return is_mono(f) && is_epi(f); }

/// s_n : X_n -> Y_{n+1} with f_n = d s_n + s_{n-1} d.
struct Homotopy {
  ChainMap map;
  std::map<int, Matrix> s;

  Matrix at(int n) const {
    auto it = s.find(n);
    if (it != s.end()) return it->second;
    return Matrix(map.source().ring(), map.target().obj(n + 1).gens(), map.source().obj(n).gens());
  }

  bool verify() const {
    const ChainComplex& X = map.source();
    const ChainComplex& Y = map.target();
    for (int n = X.lo(); n <= X.hi(); ++n) {
      ModuleMap rhs(X.obj(n), Y.obj(n), Y.d(n + 1) * at(n) + at(n - 1) * X.d(n));
      if (!maps_equal(map.at(n), rhs)) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Homology

/// Generators of Z_n X in X_n coordinates.
inline Matrix cycles(const ChainComplex& X, int n) { return kernel_generators(X.dmap(n)); }
/// Generators of B_n X in X_n coordinates.
inline Matrix boundaries(const ChainComplex& X, int n) { return X.d(n + 1); }

inline FpModule cycle_module(const ChainComplex& X, int n) {
  return present(X.ring(), cycles(X, n), X.obj(n).lattice());
}

inline FpModule homology(const ChainComplex& X, int n) { return homology_at(X.dmap(n + 1), X.dmap(n)); }

inline bool is_exact(const ChainComplex& X) {
  for (int n = X.lo(); n <= X.hi(); ++n)
    if (!is_zero(homology(X, n))) return false;
  return true;
}

/// Induced map H_n f.
inline ModuleMap homology_map(const ChainMap& f, int n) {
  const ChainComplex& X = f.source();
  const ChainComplex& Y = f.target();
  Matrix zx = cycles(X, n);
  Matrix zy = cycles(Y, n);
  FpModule hx = homology(X, n), hy = homology(Y, n);
  Matrix L = Matrix::hcat(Y.d(n + 1).lifted(), Y.obj(n).lattice());
  auto c = express_in(zy, L, f.matrix(n) * zx, X.ring());
  ensure(c.has_value(), "chain map does not preserve cycles");
  return ModuleMap(hx, hy, *c);
}

// ---------------------------------------------------------------------------
// Spheres, disks, shifts, sums

inline ChainComplex sphere(int n, const FpModule& M) { return ChainComplex(M.ring(), n, {M}, {}); }

/// M in degrees n and n-1 with identity differential.
inline ChainComplex disk(int n, const FpModule& M) {
  return ChainComplex(M.ring(), n - 1, {M, M}, {Matrix::identity(M.ring(), M.gens())});
}

/// Canonical S^{n-1}(M) -> D^n(M) -> S^n(M).
inline std::pair<ChainMap, ChainMap> sphere_disk_sequence(int n, const FpModule& M) {
  const Ring& r = M.ring();
  ChainComplex s0 = sphere(n - 1, M), dk = disk(n, M), s1 = sphere(n, M);
  Matrix I = Matrix::identity(r, M.gens());
  return {ChainMap(s0, dk, {{n - 1, I}}), ChainMap(dk, s1, {{n, I}})};
}

/// X[k]_n = X_{n-k}, differential multiplied by (-1)^k.
inline ChainComplex shift(const ChainComplex& X, int k) {
  if (X.empty()) return X;
  std::vector<FpModule> objs;
  std::vector<Matrix> diffs;
  for (int n = X.lo(); n <= X.hi(); ++n) objs.push_back(X.obj(n));
  for (int n = X.lo() + 1; n <= X.hi(); ++n) diffs.push_back(k % 2 ? -X.d(n) : X.d(n));
  return ChainComplex(X.ring(), X.lo() + k, objs, diffs);
}

inline ChainMap shift(const ChainMap& f, int k) {
  std::map<int, Matrix> c;
  for (auto& [n, m] : f.components()) c[n + k] = m;
  return {shift(f.source(), k), shift(f.target(), k), c};
}

/// Complex from degree range with object/differential callbacks.
template <class Obj, class Diff>
ChainComplex build_complex(const Ring& r, int lo, int hi, Obj obj, Diff diff) {
  if (hi < lo) return ChainComplex(r);
  std::vector<FpModule> objs;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) objs.push_back(obj(n));
  for (int n = lo + 1; n <= hi; ++n) diffs.push_back(diff(n));
  return ChainComplex(r, lo, objs, diffs);
}

/// Isomorphic complex with every object in invariant-factor form, and the iso X -> X'.
inline ChainMap minimal_presentation(const ChainComplex& X) {
  const Ring& r = X.ring();
  std::map<int, Simplified> s;
  for (int n = X.lo() - 1; n <= X.hi(); ++n) s.emplace(n, simplify(X.obj(n)));
  ChainComplex Y = build_complex(
      r, X.lo(), X.hi(), [&](int n) { return s.at(n).module; },
      [&](int n) { return s.at(n - 1).to * X.d(n) * s.at(n).from; });
  std::map<int, Matrix> c;
  for (int n = X.lo(); n <= X.hi(); ++n) c[n] = s.at(n).to;
  return ChainMap(X, Y, c);
}

inline ChainComplex direct_sum(const ChainComplex& X, const ChainComplex& Y) {
  require_same_ring(X.ring(), Y.ring(), "direct_sum");
  auto [lo, hi] = joint_range(X, Y);
  return build_complex(
      X.ring(), lo, hi, [&](int n) { return direct_sum(X.obj(n), Y.obj(n)); },
      [&](int n) { return Matrix::block_diag(X.d(n), Y.d(n)); });
}

inline ChainComplex direct_sum(const std::vector<ChainComplex>& parts, const Ring& r) {
  ChainComplex out(r);
  for (auto& p : parts) out = direct_sum(out, p);
  return out;
}

inline ChainMap direct_sum_maps(const ChainMap& f, const ChainMap& g) {
  ChainComplex s = direct_sum(f.source(), g.source()), t = direct_sum(f.target(), g.target());
  std::map<int, Matrix> c;
  for (int n = s.lo(); n <= s.hi(); ++n) c[n] = Matrix::block_diag(f.matrix(n), g.matrix(n));
  return {s, t, c};
}

/// [f | g] : X (+) Y -> Z
inline ChainMap copair(const ChainMap& f, const ChainMap& g) {
  ChainComplex s = direct_sum(f.source(), g.source());
  std::map<int, Matrix> c;
  for (int n = s.lo(); n <= s.hi(); ++n) c[n] = Matrix::hcat(f.matrix(n), g.matrix(n));
  return {s, f.target(), c};
}

/// (f ; g) : X -> Y (+) Z
inline ChainMap pair_maps(const ChainMap& f, const ChainMap& g) {
  ChainComplex t = direct_sum(f.target(), g.target());
  std::map<int, Matrix> c;
  for (int n = f.source().lo(); n <= f.source().hi(); ++n) c[n] = Matrix::vcat(f.matrix(n), g.matrix(n));
  return {f.source(), t, c};
}

/// Inclusions X -> X (+) Y and Y -> X (+) Y, projections back.
inline ChainMap inject_left(const ChainComplex& X, const ChainComplex& Y) {
  return pair_maps(ChainMap::identity(X), ChainMap::zero(X, Y));
}
inline ChainMap inject_right(const ChainComplex& X, const ChainComplex& Y) {
  return pair_maps(ChainMap::zero(Y, X), ChainMap::identity(Y));
}
inline ChainMap project_left(const ChainComplex& X, const ChainComplex& Y) {
  return copair(ChainMap::identity(X), ChainMap::zero(Y, X));
}
inline ChainMap project_right(const ChainComplex& X, const ChainComplex& Y) {
  return copair(ChainMap::zero(X, Y), ChainMap::identity(Y));
}

// ---------------------------------------------------------------------------
// Tensor products

/// Position of the X_i (x) Y_j block inside (X (x) Y)_{i+j}.
struct TensorLayout {
  const ChainComplex* X;
  const ChainComplex* Y;

  std::vector<int> parts(int k) const {
    std::vector<int> is;
    for (int i = X->lo(); i <= X->hi(); ++i)
      if (k - i >= Y->lo() && k - i <= Y->hi()) is.push_back(i);
    return is;
  }
  std::size_t offset(int k, int i) const {
    std::size_t off = 0;
    for (int a : parts(k)) {
      if (a == i) return off;
      off += X->obj(a).gens() * Y->obj(k - a).gens();
    }
    return off;
  }
  std::size_t size(int k) const { return offset(k, X->hi() + 1); }
};

/// Total complex with d(x (x) y) = dx (x) y + (-1)^i x (x) dy.
inline ChainComplex tensor_complexes(const ChainComplex& X, const ChainComplex& Y) {
  require_same_ring(X.ring(), Y.ring(), "tensor_complexes");
  const Ring& r = X.ring();
  if (X.empty() || Y.empty()) return ChainComplex(r);
  TensorLayout lay{&X, &Y};
  auto obj = [&](int k) {
    FpModule out = FpModule::zero(r);
    for (int i : lay.parts(k)) out = direct_sum(out, tensor_modules(X.obj(i), Y.obj(k - i)));
    return out;
  };
  auto diff = [&](int k) {
    Matrix D(r, lay.size(k - 1), lay.size(k));
    for (int i : lay.parts(k)) {
      int j = k - i;
      std::size_t col = lay.offset(k, i);
      std::size_t gy = Y.obj(j).gens(), gx = X.obj(i).gens();
      if (i - 1 >= X.lo() && X.obj(i - 1).gens() && gx)
        D.paste(lay.offset(k - 1, i - 1), col, Matrix::kron(X.d(i), Matrix::identity(r, gy)));
      if (j - 1 >= Y.lo() && Y.obj(j - 1).gens() && gy) {
        Matrix b = Matrix::kron(Matrix::identity(r, gx), Y.d(j));
        D.paste(lay.offset(k - 1, i), col, i % 2 ? -b : b);
      }
    }
    return D;
  };
  return build_complex(r, X.lo() + Y.lo(), X.hi() + Y.hi(), obj, diff);
}

inline ChainMap tensor_chainmaps(const ChainMap& f, const ChainMap& g) {
  ChainComplex S = tensor_complexes(f.source(), g.source());
  ChainComplex T = tensor_complexes(f.target(), g.target());
  TensorLayout ls{&f.source(), &g.source()}, lt{&f.target(), &g.target()};
  const Ring& r = S.ring();
  std::map<int, Matrix> c;
  for (int k = S.lo(); k <= S.hi(); ++k) {
    Matrix m(r, T.obj(k).gens(), S.obj(k).gens());
    for (int i : ls.parts(k)) {
      int j = k - i;
      if (f.target().obj(i).gens() == 0 || g.target().obj(j).gens() == 0) continue;
      m.paste(lt.offset(k, i), ls.offset(k, i), Matrix::kron(f.matrix(i), g.matrix(j)));
    }
    c[k] = m;
  }
  return {S, T, c};
}

/// x (x) y |-> (-1)^{ij} y (x) x.
inline ChainMap tensor_symmetry(const ChainComplex& X, const ChainComplex& Y) {
  ChainComplex S = tensor_complexes(X, Y), T = tensor_complexes(Y, X);
  TensorLayout ls{&X, &Y}, lt{&Y, &X};
  std::map<int, Matrix> c;
  for (int k = S.lo(); k <= S.hi(); ++k) {
    Matrix m(S.ring(), T.obj(k).gens(), S.obj(k).gens());
    for (int i : ls.parts(k)) {
      int j = k - i;
      std::size_t gx = X.obj(i).gens(), gy = Y.obj(j).gens();
      int sign = (i % 2 != 0 && j % 2 != 0) ? -1 : 1;
      for (std::size_t a = 0; a < gx; ++a)
        for (std::size_t b = 0; b < gy; ++b)
          m.set(lt.offset(k, j) + b * gx + a, ls.offset(k, i) + a * gy + b, sign);
    }
    c[k] = m;
  }
  return {S, T, c};
}

/// (x (x) y) (x) z |-> x (x) (y (x) z).
inline ChainMap tensor_associator(const ChainComplex& X, const ChainComplex& Y, const ChainComplex& Z) {
  ChainComplex XY = tensor_complexes(X, Y), YZ = tensor_complexes(Y, Z);
  ChainComplex S = tensor_complexes(XY, Z), T = tensor_complexes(X, YZ);
  TensorLayout lxy{&X, &Y}, lyz{&Y, &Z}, ls{&XY, &Z}, lt{&X, &YZ};
  std::map<int, Matrix> c;
  for (int k = S.lo(); k <= S.hi(); ++k) {
    Matrix m(S.ring(), T.obj(k).gens(), S.obj(k).gens());
    for (int p : ls.parts(k)) {
      int l = k - p;
      for (int i : lxy.parts(p)) {
        int j = p - i;
        std::size_t gx = X.obj(i).gens(), gy = Y.obj(j).gens(), gz = Z.obj(l).gens();
        std::size_t gyz = YZ.obj(j + l).gens();
        for (std::size_t a = 0; a < gx; ++a)
          for (std::size_t b = 0; b < gy; ++b)
            for (std::size_t e = 0; e < gz; ++e) {
              std::size_t src = ls.offset(k, p) + (lxy.offset(p, i) + a * gy + b) * gz + e;
              std::size_t dst = lt.offset(k, i) + a * gyz + lyz.offset(j + l, j) + b * gz + e;
              m.set(dst, src, 1);
            }
      }
    }
    c[k] = m;
  }
  return {S, T, c};
}

/// S^0(R) (x) Y -> Y.
inline ChainMap tensor_unitor(const ChainComplex& Y) {
  ChainComplex unit = sphere(0, FpModule::free(Y.ring(), 1));
  ChainComplex S = tensor_complexes(unit, Y);
  std::map<int, Matrix> c;
  for (int k = S.lo(); k <= S.hi(); ++k) c[k] = Matrix::identity(Y.ring(), Y.obj(k).gens());
  return {S, Y, c};
}

// ---------------------------------------------------------------------------
// Cones, kernels, cokernels, pushouts, pullbacks

/// Cone(f)_n = X_{n-1} (+) Y_n with d(x, y) = (-dx, f x + dy).
inline ChainComplex cone(const ChainMap& f) {
  const ChainComplex& X = f.source();
  const ChainComplex& Y = f.target();
  const Ring& r = X.ring();
  int lo = std::min(X.empty() ? Y.lo() : X.lo() + 1, Y.empty() ? X.lo() + 1 : Y.lo());
  int hi = std::max(X.empty() ? Y.hi() : X.hi() + 1, Y.empty() ? X.hi() + 1 : Y.hi());
  if (X.empty() && Y.empty()) return ChainComplex(r);
  return build_complex(
      r, lo, hi, [&](int n) { return direct_sum(X.obj(n - 1), Y.obj(n)); },
      [&](int n) {
        Matrix D(r, X.obj(n - 2).gens() + Y.obj(n - 1).gens(), X.obj(n - 1).gens() + Y.obj(n).gens());
        D.paste(0, 0, -X.d(n - 1));
        D.paste(X.obj(n - 2).gens(), 0, f.matrix(n - 1));
        D.paste(X.obj(n - 2).gens(), X.obj(n - 1).gens(), Y.d(n));
        return D;
      });
}

inline bool is_quasi_iso(const ChainMap& f) { return is_exact(cone(f)); }

/// Sub-complex generated by given elements (closed under d), with its inclusion.
inline ChainMap generated_subcomplex(const ChainComplex& X, const std::map<int, Matrix>& gens) {
  const Ring& r = X.ring();
  std::map<int, Matrix> S;
  for (int n = X.hi(); n >= X.lo(); --n) {
    Matrix s(r, X.obj(n).gens(), 0);
    if (auto it = gens.find(n); it != gens.end()) s = Matrix::hcat(s, it->second);
    if (auto it = S.find(n + 1); it != S.end()) s = Matrix::hcat(s, X.d(n + 1) * it->second);
    S[n] = s;
  }
  return [&] {
    std::map<int, FpModule> objs;
    for (auto& [n, s] : S) objs[n] = present(r, s, X.obj(n).lattice());
    ChainComplex sub = build_complex(
        r, X.lo(), X.hi(), [&](int n) { return objs.at(n); },
        [&](int n) {
          std::size_t k = S.at(n).cols();
          Matrix D(r, S.at(n - 1).cols(), k);
          if (k == 0) return D;
          auto c = express_in(S.at(n - 1), X.obj(n - 1).lattice(), X.d(n) * S.at(n), r);
          ensure(c.has_value(), "generated subcomplex not closed under d");
          return *c;
        });
    std::map<int, Matrix> inc;
    for (auto& [n, s] : S)
      if (sub.obj(n).gens()) inc[n] = s;
    return ChainMap(sub, X, inc);
  }();
}

/// Sub-complex with the given degreewise generators, assumed closed under d.
inline ChainMap subcomplex_inclusion(const ChainComplex& X, const std::map<int, Matrix>& gens) {
  const Ring& r = X.ring();
  auto S = [&](int n) {
    auto it = gens.find(n);
    return it == gens.end() ? Matrix(r, X.obj(n).gens(), 0) : it->second;
  };
  ChainComplex sub = build_complex(
      r, X.lo(), X.hi(), [&](int n) { return present(r, S(n), X.obj(n).lattice()); },
      [&](int n) {
        auto c = express_in(S(n - 1), X.obj(n - 1).lattice(), X.d(n) * S(n), r);
        if (!c) throw PreconditionFailed("subcomplex generators not closed under d in degree " + std::to_string(n));
        return *c;
      });
  std::map<int, Matrix> inc;
  for (int n = sub.lo(); n <= sub.hi(); ++n) inc[n] = S(n);
  return {sub, X, inc};
}

inline ChainMap kernel(const ChainMap& f) {
  std::map<int, Matrix> g;
  for (int n = f.source().lo(); n <= f.source().hi(); ++n) g[n] = kernel_generators(f.at(n));
  return subcomplex_inclusion(f.source(), g);
}

inline ChainMap image_inclusion(const ChainMap& f) {
  std::map<int, Matrix> g;
  for (int n = f.target().lo(); n <= f.target().hi(); ++n) g[n] = f.matrix(n);
  return subcomplex_inclusion(f.target(), g);
}

/// Quotient of X by the subcomplex generated by S, with the projection.
inline ChainMap quotient(const ChainComplex& X, const std::map<int, Matrix>& S) {
  const Ring& r = X.ring();
  auto Q = [&](int n) {
    auto it = S.find(n);
    return it == S.end() ? ModuleMap::identity(X.obj(n)) : quotient(X.obj(n), it->second);
  };
  ChainComplex C = build_complex(r, X.lo(), X.hi(), [&](int n) { return Q(n).target(); }, [&](int n) { return X.d(n); });
  std::map<int, Matrix> p;
  for (int n = C.lo(); n <= C.hi(); ++n) p[n] = Matrix::identity(r, X.obj(n).gens());
  return {X, C, p};
}

inline ChainMap cokernel(const ChainMap& f) {
  std::map<int, Matrix> S;
  for (int n = f.source().lo(); n <= f.source().hi(); ++n) S[n] = f.matrix(n);
  return quotient(f.target(), S);
}

struct Pushout {
  ChainComplex object;
  ChainMap from_left;   // B -> P
  ChainMap from_right;  // C -> P
};

/// Pushout of B <-f- A -g-> C, degreewise coker(A -> B (+) C, a |-> (f a, -g a)).
inline Pushout pushout_chainmaps(const ChainMap& f, const ChainMap& g) {
  if (!(f.source() == g.source())) throw PreconditionFailed("pushout: maps need a common source");
  const ChainComplex& A = f.source();
  const ChainComplex& B = f.target();
  const ChainComplex& C = g.target();
  ChainComplex BC = direct_sum(B, C);
  std::map<int, Matrix> S;
  for (int n = A.lo(); n <= A.hi(); ++n) S[n] = Matrix::vcat(f.matrix(n), -g.matrix(n));
  ChainMap q = quotient(BC, S);
  Pushout out{q.target(), compose(q, inject_left(B, C)), compose(q, inject_right(B, C))};
  if (is_mono(f)) ensure(is_mono(out.from_right), "pushout of a mono is not mono");
  if (is_mono(g)) ensure(is_mono(out.from_left), "pushout of a mono is not mono");
  return out;
}

struct Pullback {
  ChainComplex object;
  ChainMap to_left;   // P -> B
  ChainMap to_right;  // P -> C
};

/// Pullback of B -f-> D <-g- C, degreewise ker(B (+) C -> D, (b, c) |-> f b - g c).
inline Pullback pullback_chainmaps(const ChainMap& f, const ChainMap& g) {
  if (!(f.target() == g.target())) throw PreconditionFailed("pullback: maps need a common target");
  ChainMap diff = copair(f, ChainMap(g.source(), g.target(), [&] {
                           std::map<int, Matrix> c;
                           for (auto& [n, m] : g.components()) c[n] = -m;
                           return c;
                         }()));
  ChainMap k = kernel(diff);
  const ChainComplex& B = f.source();
  const ChainComplex& C = g.source();
  Pullback out{k.source(), compose(project_left(B, C), k), compose(project_right(B, C), k)};
  if (is_mono(f)) ensure(is_mono(out.to_right), "pullback of a mono is not mono");
  return out;
}

// ---------------------------------------------------------------------------
// Homotopies and Hom

inline std::optional<Homotopy> is_null_homotopic(const ChainMap& f) {
  const ChainComplex& X = f.source();
  const ChainComplex& Y = f.target();
  const Ring& r = X.ring();
  if (X.empty()) return Homotopy{f, {}};
  LinearSystem sys(r);
  std::map<int, std::size_t> var;
  for (int n = X.lo() - 1; n <= X.hi(); ++n) {
    var[n] = sys.add_unknown(Y.obj(n + 1).gens(), X.obj(n).gens());
    sys.add_constraint({{Matrix::identity(r, Y.obj(n + 1).gens()), var[n], X.obj(n).relations()}},
                       Matrix(r, Y.obj(n + 1).gens(), X.obj(n).relations().cols()), Y.obj(n + 1).lattice());
  }
  for (int n = X.lo(); n <= X.hi(); ++n) {
    std::size_t gx = X.obj(n).gens();
    sys.add_constraint({{Y.d(n + 1), var[n], Matrix::identity(r, gx)}, {Matrix::identity(r, Y.obj(n).gens()), var[n - 1], X.d(n)}},
                       f.matrix(n), Y.obj(n).lattice());
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  Homotopy h{f, {}};
  for (auto& [n, id] : var)
    if ((*sol)[id].rows() && (*sol)[id].cols()) h.s[n] = (*sol)[id];
  ensure(h.verify(), "homotopy failed verification");
  return h;
}

/// Hom_Ch(X, Y) as a module: generators as chain maps and as vectors in the
/// ambient module (+)_n Y_n^{gens X_n} (column-major per degree).
struct ChainHom {
  std::vector<ChainMap> generators;
  Matrix vectors;  // ambient coordinates, one column per generator
  Matrix lattice;  // relation lattice of the ambient module
  std::vector<int> degrees;
};

inline std::size_t chain_hom_dim(const ChainComplex& X, const ChainComplex& Y, const std::vector<int>& degs) {
  std::size_t k = 0;
  for (int n : degs) k += X.obj(n).gens() * Y.obj(n).gens();
  return k;
}

inline Matrix chain_hom_vector(const ChainMap& f, const std::vector<int>& degs) {
  const ChainComplex& X = f.source();
  const ChainComplex& Y = f.target();
  Matrix v(X.ring(), chain_hom_dim(X, Y, degs), 1);
  std::size_t off = 0;
  for (int n : degs) {
    Matrix m = f.matrix(n);
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) v.set(off + j * m.rows() + i, 0, m(i, j));
    off += m.rows() * m.cols();
  }
  return v;
}

inline ChainHom chain_hom(const ChainComplex& X, const ChainComplex& Y) {
  require_same_ring(X.ring(), Y.ring(), "chain_hom");
  const Ring& r = X.ring();
  std::vector<int> degs;
  for (int n = X.lo(); n <= X.hi(); ++n)
    if (X.obj(n).gens() && Y.obj(n).gens()) degs.push_back(n);
  LinearSystem sys(r);
  std::map<int, std::size_t> var;
  for (int n : degs) {
    var[n] = sys.add_unknown(Y.obj(n).gens(), X.obj(n).gens());
    sys.add_constraint({{Matrix::identity(r, Y.obj(n).gens()), var[n], X.obj(n).relations()}},
                       Matrix(r, Y.obj(n).gens(), X.obj(n).relations().cols()), Y.obj(n).lattice());
  }
  for (int n = X.lo(); n <= X.hi() + 1; ++n) {
    // d f_n - f_{n-1} d = 0 in Y_{n-1}
    std::vector<LinearSystem::Term> terms;
    if (var.count(n)) terms.push_back({Y.d(n), var[n], Matrix::identity(r, X.obj(n).gens())});
    if (var.count(n - 1)) terms.push_back({-Matrix::identity(r, Y.obj(n - 1).gens()), var[n - 1], X.d(n)});
    if (terms.empty() || Y.obj(n - 1).gens() == 0 || X.obj(n).gens() == 0) continue;
    sys.add_constraint(terms, Matrix(r, Y.obj(n - 1).gens(), X.obj(n).gens()), Y.obj(n - 1).lattice());
  }
  ChainHom out;
  out.degrees = degs;
  std::size_t dim = chain_hom_dim(X, Y, degs);
  out.vectors = Matrix(r, dim, 0);
  Matrix L(Ring::integers(), 0, 0);
  for (int n : degs) {
    Matrix block = Matrix::kron(Matrix::identity(Ring::integers(), X.obj(n).gens()), Y.obj(n).lattice());
    L = Matrix::block_diag(L, block);
  }
  out.lattice = L;
  if (degs.empty()) return out;
  for (auto& sol : sys.kernel_generators()) {
    std::map<int, Matrix> c;
    for (int n : degs) c[n] = sol[var[n]];
    ChainMap f(X, Y, c);
    if (is_zero_map(f)) continue;
    out.vectors = Matrix::hcat(out.vectors, chain_hom_vector(f, degs));
    out.generators.push_back(f);
  }
  return out;
}

/// Every chain map X -> Y is null-homotopic (checked on Hom generators).
inline std::optional<ChainMap> non_null_homotopic_map(const ChainComplex& X, const ChainComplex& Y) {
  for (auto& f : chain_hom(X, Y).generators)
    if (!is_null_homotopic(f)) return f;
  return std::nullopt;
}

/// Epimorphism onto X from a finite sum of disks on free modules.
inline ChainMap disk_cover(const ChainComplex& X) {
  const Ring& r = X.ring();
  if (X.empty()) return ChainMap::zero(ChainComplex(r), X);
  std::vector<ChainMap> legs;
  for (int n = X.lo(); n <= X.hi(); ++n) {
    std::size_t g = X.obj(n).gens();
    if (!g) continue;
    ChainComplex D = disk(n, FpModule::free(r, g));
    legs.push_back(ChainMap(D, X, {{n, Matrix::identity(r, g)}, {n - 1, X.d(n)}}));
  }
  ChainMap cover = legs.front();
  for (std::size_t k = 1; k < legs.size(); ++k) cover = copair(cover, legs[k]);
  ensure(is_epi(cover), "disk cover is not epi");
  return cover;
}

/// Ext^1 in Ch(R): Hom(K, Y) / restrictions of Hom(P, Y) for 0 -> K -> P -> X -> 0,
/// P a finite sum of disks on frees.
inline FpModule ext1_complexes(const ChainComplex& X, const ChainComplex& Y) {
  require_same_ring(X.ring(), Y.ring(), "ext1_complexes");
  const Ring& r = X.ring();
  if (X.empty() || Y.empty()) return FpModule::zero(r);
  ChainMap pi = disk_cover(X);
  ChainMap k = kernel(pi);
  const ChainComplex& K = k.source();
  if (K.empty()) return FpModule::zero(r);
  ChainHom homK = chain_hom(K, Y);
  Matrix restricted(r, homK.vectors.rows(), 0);
  for (auto& psi : chain_hom(pi.source(), Y).generators)
    restricted = Matrix::hcat(restricted, chain_hom_vector(compose(psi, k), homK.degrees));
  return present(r, homK.vectors, Matrix::hcat(homK.lattice, restricted.lifted()));
}

}  // namespace cotor
