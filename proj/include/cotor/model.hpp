#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cotor/kaplansky.hpp"
#include "cotor/sampling.hpp"

namespace cotor {

enum class StructureId { Injective, Projective, Flat };

inline std::string structure_name(StructureId s) {
  switch (s) {
    case StructureId::Injective: return "injective";
    case StructureId::Projective: return "projective";
    case StructureId::Flat: return "flat";
  }
  return "?";
}

/// A model structure on bounded complexes induced by a cotorsion pair.
struct ModelStructureSpec {
  Ring ring = Ring::integers();
  StructureId id = StructureId::Projective;
  CotorsionPairSpec pair;
  KaplanskyConfig cfg;

  std::string name() const { return structure_name(id) + " over " + ring.name(); }
  std::vector<ChainMap> I(int lo, int hi) const { return induced_generating_monos(pair, lo, hi); }
  std::vector<ChainMap> J(int lo, int hi) const { return induced_trivial_monos(pair, lo, hi); }

  void validate() const {
    if (id == StructureId::Injective && !ring.is_quasi_frobenius())
      throw UnsupportedRing("the injective structure needs a quasi-Frobenius ring, got " + ring.name());
    if (!(pair.ring == ring)) throw ValidationError("cotorsion pair over a different ring");
    pair.validate();
    cfg.validate();
  }
};

inline ModelStructureSpec make_structure(StructureId id, const Ring& r, KaplanskyConfig cfg = {}) {
  ModelStructureSpec s;
  s.ring = r;
  s.id = id;
  s.cfg = cfg;
  switch (id) {
    case StructureId::Injective: s.pair = injective_pair(r); break;
    case StructureId::Projective: s.pair = projective_pair(r); break;
    case StructureId::Flat: s.pair = flat_pair(r); break;
  }
  s.validate();
  return s;
}

/// The flat structure with the left class replaced by all modules. Not a model structure.
inline ModelStructureSpec sabotaged_structure(const Ring& r) {
  ModelStructureSpec s;
  s.ring = r;
  s.id = StructureId::Flat;
  s.pair = flat_pair(r);
  s.pair.name = "sabotaged";
  s.pair.left = ClassSpec{ClassId::AllObjects, {}, 3};
  return s;
}

// ---------------------------------------------------------------------------
// Classification

struct MapClass {
  bool weq = false, cof = false, fib = false, triv_cof = false, triv_fib = false;
  std::vector<std::string> certificates;
};

namespace detail {

inline bool degreewise(const ChainComplex& X, const std::function<bool(const FpModule&)>& pred) {
  for (int n = X.lo(); n <= X.hi(); ++n)
    if (!pred(X.obj(n))) return false;
  return true;
}

inline void require_structure_ring(const ModelStructureSpec& spec, const Ring& r, const char* what) {
  require_same_ring(spec.ring, r, what);
  if (spec.id == StructureId::Injective && !r.is_quasi_frobenius())
    throw UnsupportedRing(std::string(what) + ": injective structure over " + r.name());
}

/// Quick tests, exact for bounded complexes.
inline bool quick_cof(const ChainMap& f, const ModelStructureSpec& s) {
  return is_mono(f) && degreewise(cokernel(f).target(), [&](const FpModule& M) { return s.pair.in_left(M); });
}
inline bool quick_fib(const ChainMap& f, const ModelStructureSpec& s) {
  return is_epi(f) && degreewise(kernel(f).source(), [&](const FpModule& M) { return s.pair.in_right(M); });
}

}  // namespace detail

inline MapClass classify_map(const ChainMap& f, const ModelStructureSpec& spec) {
  detail::require_structure_ring(spec, f.source().ring(), "classify_map");
  MapClass c;
  c.weq = is_quasi_iso(f);
  c.certificates.push_back(c.weq ? "weq: cone exact" : "not weq: cone has homology");
  if (is_mono(f)) {
    ChainComplex C = cokernel(f).target();
    auto dg = complex_class_member(C, ComplexClass::DgFLeft, spec.pair);
    auto tl = complex_class_member(C, ComplexClass::FTilde, spec.pair);
    c.cof = dg.member;
    c.triv_cof = tl.member;
    c.certificates.push_back("mono, cokernel " + std::string(dg.member ? "in " : "not in ") + "dg-" + spec.pair.left.name() +
                             (dg.member ? "" : " (" + dg.witness + ")"));
  } else {
    c.certificates.push_back("not mono");
  }
  if (is_epi(f)) {
    ChainComplex K = kernel(f).source();
    auto dg = complex_class_member(K, ComplexClass::DgCRight, spec.pair);
    auto tl = complex_class_member(K, ComplexClass::CTilde, spec.pair);
    c.fib = dg.member;
    c.triv_fib = tl.member;
    c.certificates.push_back("epi, kernel " + std::string(dg.member ? "in " : "not in ") + "dg-" + spec.pair.right_name() +
                             (dg.member ? "" : " (" + dg.witness + ")"));
  } else {
    c.certificates.push_back("not epi");
  }
  ensure(c.triv_cof == (c.cof && c.weq), "trivial cofibration flag disagrees with cof and weq");
  ensure(c.triv_fib == (c.fib && c.weq), "trivial fibration flag disagrees with fib and weq");
  return c;
}

// ---------------------------------------------------------------------------
// Replacements

/// Cofibrant replacement: map Q -> X. Fibrant replacement: map X -> J.
struct Replacement {
  ChainComplex object;
  ChainMap map;
  bool identity = false;
};

inline Replacement cofibrant_replacement(const ChainComplex& X, const ModelStructureSpec& spec) {
  detail::require_structure_ring(spec, X.ring(), "cofibrant_replacement");
  const Ring& r = X.ring();
  if (detail::degreewise(X, [&](const FpModule& M) { return spec.pair.in_left(M); }))
    return {X, ChainMap::identity(X), true};
  // Ascending: Q_n covers {(w, z) in X_n (+) Q_{n-1} : dw = psi z, dz = 0}.
  int lo = X.lo();
  std::vector<FpModule> objs;
  std::vector<Matrix> diffs;
  std::map<int, Matrix> psi;
  auto Q = [&](int n) { return (n >= lo && n - lo < static_cast<int>(objs.size())) ? objs[n - lo] : FpModule::zero(r); };
  auto dQ = [&](int n) {
    if (n - 1 >= lo && n - lo < static_cast<int>(objs.size())) return diffs[n - lo - 1];
    return Matrix(r, Q(n - 1).gens(), Q(n).gens());
  };
  auto P = [&](int n) {
    auto it = psi.find(n);
    return it != psi.end() ? it->second : Matrix(r, X.obj(n).gens(), Q(n).gens());
  };
  for (int n = lo;; ++n) {
    if (n > X.hi() + static_cast<int>(spec.cfg.step_budget))
      throw BudgetExceeded("cofibrant_replacement: no bounded replacement within the step budget");
    FpModule W = X.obj(n), Qp = Q(n - 1), Wp = X.obj(n - 1), Qpp = Q(n - 2);
    FpModule S = direct_sum(W, Qp), T = direct_sum(Wp, Qpp);
    Matrix Phi(r, T.gens(), S.gens());
    Phi.paste(0, 0, X.d(n));
    Phi.paste(0, W.gens(), -P(n - 1));
    Phi.paste(Wp.gens(), W.gens(), dQ(n - 1));
    Matrix K = kernel_generators(ModuleMap(S, T, Phi));
    FpModule M = present(r, K, S.lattice());
    if (n > X.hi() && is_zero(M)) break;
    Simplified s = simplify(M);
    Matrix G = K * s.from;
    FpModule Qn = spec.pair.in_left(s.module) ? s.module : FpModule::free(r, s.module.gens());
    psi[n] = G.row_range(0, W.gens());
    if (n > lo) diffs.push_back(G.row_range(W.gens(), W.gens() + Qp.gens()));
    objs.push_back(Qn);
  }
  ChainComplex Qc(r, lo, objs, diffs);
  ChainMap p(Qc, X, psi);
  ensure(is_epi(p), "cofibrant replacement is not epi");
  ensure(is_quasi_iso(p), "cofibrant replacement is not a quasi-isomorphism");
  ensure(detail::degreewise(Qc, [&](const FpModule& M) { return spec.pair.in_left(M); }), "replacement left the class");
  return {Qc, p, false};
}

namespace detail {

/// Embedding of M into a free module over a quasi-Frobenius Z/n, as a matrix.
inline std::pair<FpModule, Matrix> injective_hull(const FpModule& M) {
  const Ring& r = M.ring();
  Simplified s = simplify(M);
  Matrix e = s.to;
  for (std::size_t i = 0; i < s.invariants.size(); ++i) {
    Int k = r.modulus() / s.invariants[i];
    for (std::size_t j = 0; j < e.cols(); ++j) e.set(i, j, e(i, j) * k);
  }
  return {FpModule::free(r, s.invariants.size()), e};
}

}  // namespace detail

inline Replacement fibrant_replacement(const ChainComplex& X, const ModelStructureSpec& spec) {
  detail::require_structure_ring(spec, X.ring(), "fibrant_replacement");
  const Ring& r = X.ring();
  if (detail::degreewise(X, [&](const FpModule& M) { return spec.pair.in_right(M); }))
    return {X, ChainMap::identity(X), true};
  if (spec.id != StructureId::Injective) throw UnsupportedRing("fibrant_replacement: right class is not injective");
  // Descending: J_n is a hull of X_n (+) J_{n+1} modulo {(dw, d j - phi w)}.
  int hi = X.hi();
  std::map<int, FpModule> objs;
  std::map<int, Matrix> dJ, phi;
  auto J = [&](int n) { return objs.count(n) ? objs.at(n) : FpModule::zero(r); };
  auto D = [&](int n) { return dJ.count(n) ? dJ.at(n) : Matrix(r, J(n - 1).gens(), J(n).gens()); };
  auto F = [&](int n) { return phi.count(n) ? phi.at(n) : Matrix(r, J(n).gens(), X.obj(n).gens()); };
  int n = hi;
  for (;; --n) {
    if (n < X.lo() - static_cast<int>(spec.cfg.step_budget))
      throw BudgetExceeded("fibrant_replacement: no bounded replacement within the step budget");
    FpModule W = X.obj(n), Jp = J(n + 1), Wp = X.obj(n + 1), Jpp = J(n + 2);
    FpModule S = direct_sum(Wp, Jpp), T = direct_sum(W, Jp);
    Matrix rho(r, T.gens(), S.gens());
    rho.paste(0, 0, X.d(n + 1));
    rho.paste(W.gens(), 0, -F(n + 1));
    rho.paste(W.gens(), Wp.gens(), D(n + 2));
    FpModule N = cokernel(ModuleMap(S, T, rho)).target();
    if (n < X.lo() && is_zero(N)) break;
    Matrix e;
    FpModule Jn = FpModule::zero(r);
    if (spec.pair.in_right(N)) {
      Simplified s = simplify(N);
      Jn = s.module;
      e = s.to;
    } else {
      auto [H, m] = detail::injective_hull(N);
      Jn = H;
      e = m;
    }
    objs.emplace(n, Jn);
    phi[n] = e.col_range(0, W.gens());
    dJ[n + 1] = e.col_range(W.gens(), W.gens() + Jp.gens());
  }
  int lo = n + 1;
  std::vector<FpModule> ov;
  std::vector<Matrix> dv;
  for (int k = lo; k <= hi; ++k) {
    ov.push_back(J(k));
    if (k > lo) dv.push_back(D(k));
  }
  ChainComplex Jc(r, lo, ov, dv);
  ChainMap m(X, Jc, phi);
  ensure(is_mono(m), "fibrant replacement is not mono");
  ensure(is_quasi_iso(m), "fibrant replacement is not a quasi-isomorphism");
  return {Jc, m, false};
}

// ---------------------------------------------------------------------------
// Factorization

enum class FactorMode { CofThenTrivFib, TrivCofThenFib };

inline std::string factor_mode_name(FactorMode m) {
  return m == FactorMode::CofThenTrivFib ? "cof-then-trivfib" : "trivcof-then-fib";
}

struct Factorization {
  ChainMap original;
  ChainMap i, p;
  FactorMode mode = FactorMode::CofThenTrivFib;
  std::pair<int, int> window{0, 0};
  std::vector<std::string> certificates;
  std::optional<CellChain> cells;
  std::string cells_note;

  const ChainComplex& middle() const { return i.target(); }

  bool composes_exactly() const {
    ChainMap c = compose(p, i);
    const ChainComplex& X = original.source();
    for (int n = X.lo(); n <= X.hi(); ++n)
      if (!(c.matrix(n) == original.matrix(n))) return false;
    return true;
  }

  /// Recomputes every claim from scratch.
  bool revalidate(const ModelStructureSpec& spec) const {
    if (!composes_exactly()) return false;
    MapClass ci = classify_map(i, spec), cp = classify_map(p, spec);
    if (mode == FactorMode::CofThenTrivFib) return ci.cof && cp.triv_fib;
    return ci.triv_cof && cp.fib;
  }
};

namespace detail {

inline ChainComplex cocone(const ChainMap& f) {
  const ChainComplex& X = f.source();
  const ChainComplex& Y = f.target();
  const Ring& r = X.ring();
  if (X.empty() && Y.empty()) return ChainComplex(r);
  int lo = std::min(X.empty() ? Y.lo() - 1 : X.lo(), Y.empty() ? X.lo() : Y.lo() - 1);
  int hi = std::max(X.empty() ? Y.hi() - 1 : X.hi(), Y.empty() ? X.hi() : Y.hi() - 1);
  return build_complex(
      r, lo, hi, [&](int n) { return direct_sum(X.obj(n), Y.obj(n + 1)); },
      [&](int n) {
        Matrix D(r, X.obj(n - 1).gens() + Y.obj(n).gens(), X.obj(n).gens() + Y.obj(n + 1).gens());
        D.paste(0, 0, X.d(n));
        D.paste(X.obj(n - 1).gens(), 0, -f.matrix(n));
        D.paste(X.obj(n - 1).gens(), X.obj(n).gens(), -Y.d(n + 1));
        return D;
      });
}

inline void attach_cells(Factorization& fz, const ModelStructureSpec& spec) {
  try {
    fz.cells = icell_decompose(fz.i, spec.pair, spec.cfg);
    fz.certificates.push_back("i is a composite of " + std::to_string(fz.cells->cells.size()) + " cell attachments");
  } catch (const CertificateMissing& e) {
    fz.cells_note = e.what();
  }
}

}  // namespace detail

inline Factorization factor_map(const ChainMap& f, FactorMode mode, const ModelStructureSpec& spec) {
  detail::require_structure_ring(spec, f.source().ring(), "factor_map");
  const ChainComplex& X = f.source();
  const ChainComplex& Y = f.target();
  const Ring& r = X.ring();
  Factorization fz;
  fz.original = f;
  fz.mode = mode;
  auto [lo, hi] = joint_range(X, Y);
  fz.window = {lo - 1, hi + 1};
  bool injective = spec.id == StructureId::Injective;
  if (mode == FactorMode::CofThenTrivFib) {
    if (detail::quick_cof(f, spec)) {
      fz.i = f;
      fz.p = ChainMap::identity(Y);
      fz.certificates.push_back("f is already a cofibration");
    } else if (!injective) {
      // C_n = X_n (+) Q_n, d(x, u) = (dx - a u, dQ u), Q -> Cone(f) a cofibrant replacement
      ChainComplex Cf = cone(f);
      Replacement rep = cofibrant_replacement(Cf, spec);
      const ChainComplex& Q = rep.object;
      auto a = [&](int n) { return rep.map.matrix(n).row_range(0, X.obj(n - 1).gens()); };
      auto b = [&](int n) { return rep.map.matrix(n).row_range(X.obj(n - 1).gens(), X.obj(n - 1).gens() + Y.obj(n).gens()); };
      auto [clo, chi] = joint_range(X, Q);
      ChainComplex C = build_complex(
          r, clo, chi, [&](int n) { return direct_sum(X.obj(n), Q.obj(n)); },
          [&](int n) {
            Matrix D(r, X.obj(n - 1).gens() + Q.obj(n - 1).gens(), X.obj(n).gens() + Q.obj(n).gens());
            D.paste(0, 0, X.d(n));
            D.paste(0, X.obj(n).gens(), -a(n));
            D.paste(X.obj(n - 1).gens(), X.obj(n).gens(), Q.d(n));
            return D;
          });
      std::map<int, Matrix> ic, pc;
      for (int n = clo; n <= chi; ++n) {
        ic[n] = Matrix::vcat(Matrix::identity(r, X.obj(n).gens()), Matrix(r, Q.obj(n).gens(), X.obj(n).gens()));
        pc[n] = Matrix::hcat(f.matrix(n), b(n));
      }
      fz.i = ChainMap(X, C, ic);
      fz.p = ChainMap(C, Y, pc);
      fz.certificates.push_back(rep.identity ? "cone is already cofibrant" : "cone replaced by a dg-" + spec.pair.left.name() + " complex");
    } else {
      // C = Y (+) (+)_m D^{m+1}(J_m), X_m -> J_m an injective hull
      ChainMap j = ChainMap::zero(X, ChainComplex(r));
      for (int m = X.lo(); m <= X.hi(); ++m) {
        auto [Jm, e] = detail::injective_hull(X.obj(m));
        if (Jm.gens() == 0) continue;
        ChainComplex Dm = disk(m + 1, Jm);
        ChainMap leg(X, Dm, {{m, e}, {m + 1, e * X.d(m + 1)}});
        j = pair_maps(j, leg);
      }
      const ChainComplex& E = j.target();
      fz.i = pair_maps(f, j);
      fz.p = project_left(Y, E);
      fz.certificates.push_back("Y plus disks on injective hulls");
    }
  } else {
    if (detail::quick_fib(f, spec)) {
      fz.i = ChainMap::identity(X);
      fz.p = f;
      fz.certificates.push_back("f is already a fibration");
    } else if (!injective) {
      // X (+) disks on the generators of Y
      ChainMap cover = disk_cover(Y);
      fz.i = inject_left(X, cover.source());
      fz.p = copair(f, cover);
      fz.certificates.push_back("X plus disks covering Y");
    } else {
      // C_n = Y_n (+) J_n, d(y, w) = (dy, dw + beta y), Cocone(f) -> J a fibrant replacement
      ChainComplex Cc = detail::cocone(f);
      Replacement rep = fibrant_replacement(Cc, spec);
      const ChainComplex& Jc = rep.object;
      auto alpha = [&](int n) { return rep.map.matrix(n).col_range(0, X.obj(n).gens()); };
      auto beta = [&](int n) { return rep.map.matrix(n).col_range(X.obj(n).gens(), X.obj(n).gens() + Y.obj(n + 1).gens()); };
      auto [clo, chi] = joint_range(Y, Jc);
      ChainComplex C = build_complex(
          r, clo, chi, [&](int n) { return direct_sum(Y.obj(n), Jc.obj(n)); },
          [&](int n) {
            Matrix D(r, Y.obj(n - 1).gens() + Jc.obj(n - 1).gens(), Y.obj(n).gens() + Jc.obj(n).gens());
            D.paste(0, 0, Y.d(n));
            D.paste(Y.obj(n - 1).gens(), 0, beta(n - 1));
            D.paste(Y.obj(n - 1).gens(), Y.obj(n).gens(), Jc.d(n));
            return D;
          });
      std::map<int, Matrix> ic, pc;
      for (int n = std::min(clo, X.lo()); n <= std::max(chi, X.hi()); ++n) {
        ic[n] = Matrix::vcat(f.matrix(n), alpha(n));
        pc[n] = Matrix::hcat(Matrix::identity(r, Y.obj(n).gens()), Matrix(r, Y.obj(n).gens(), Jc.obj(n).gens()));
      }
      fz.i = ChainMap(X, C, ic);
      fz.p = ChainMap(C, Y, pc);
      fz.certificates.push_back("Y plus a fibrant replacement of the cocone");
    }
  }
  ensure(fz.composes_exactly(), "factorization does not compose to f");
  detail::attach_cells(fz, spec);
  return fz;
}

// ---------------------------------------------------------------------------
// Lifting

struct LiftProblem {
  ChainMap i, p, top, bottom;

  void validate() const {
    if (!(i.target() == bottom.source()) || !(i.source() == top.source()) || !(p.source() == top.target()) ||
        !(p.target() == bottom.target()))
      throw PreconditionFailed("lift problem: maps do not form a square");
    if (!maps_equal(compose(p, top), compose(bottom, i))) throw PreconditionFailed("lift problem: square does not commute");
  }
};

/// Solved as one linear system over all degrees at once.
inline ChainMap solve_lifting(const LiftProblem& prob, const ModelStructureSpec& spec) {
  prob.validate();
  MapClass ci = classify_map(prob.i, spec), cp = classify_map(prob.p, spec);
  if (!((ci.cof && cp.triv_fib) || (ci.triv_cof && cp.fib)))
    throw PreconditionFailed("solve_lifting: need (cofibration, trivial fibration) or (trivial cofibration, fibration)");
  const ChainComplex& B = prob.i.target();
  const ChainComplex& X = prob.p.source();
  const Ring& r = B.ring();
  auto id = [&](std::size_t k) { return Matrix::identity(r, k); };
  LinearSystem sys(r);
  std::map<int, std::size_t> var;
  for (int n = B.lo(); n <= B.hi(); ++n) {
    std::size_t gb = B.obj(n).gens(), gx = X.obj(n).gens();
    if (!gb || !gx) continue;
    var[n] = sys.add_unknown(gx, gb);
    sys.add_constraint({{id(gx), var[n], B.obj(n).relations()}}, Matrix(r, gx, B.obj(n).relations().cols()), X.obj(n).lattice());
    const ChainComplex& A = prob.i.source();
    if (A.obj(n).gens())
      sys.add_constraint({{id(gx), var[n], prob.i.matrix(n)}}, prob.top.matrix(n), X.obj(n).lattice());
    const ChainComplex& Y = prob.p.target();
    if (Y.obj(n).gens())
      sys.add_constraint({{prob.p.matrix(n), var[n], id(gb)}}, prob.bottom.matrix(n), Y.obj(n).lattice());
  }
  for (int n = B.lo(); n <= B.hi() + 1; ++n) {
    std::vector<LinearSystem::Term> terms;
    std::size_t gx = X.obj(n - 1).gens(), gb = B.obj(n).gens();
    if (!gx || !gb) continue;
    if (var.count(n)) terms.push_back({X.d(n), var[n], id(gb)});
    if (var.count(n - 1)) terms.push_back({-id(gx), var[n - 1], B.d(n)});
    if (terms.empty()) continue;
    sys.add_constraint(terms, Matrix(r, gx, gb), X.obj(n - 1).lattice());
  }
  auto sol = sys.solve();
  if (!sol) throw InternalError("NoLiftFound: lifting failed although the flags hold");
  std::map<int, Matrix> h;
  for (auto& [n, v] : var) h[n] = (*sol)[v];
  ChainMap lift(B, X, h);
  ensure(maps_equal(compose(lift, prob.i), prob.top), "lift: h i != top");
  ensure(maps_equal(compose(prob.p, lift), prob.bottom), "lift: p h != bottom");
  return lift;
}

// ---------------------------------------------------------------------------
// Derived tensor product and pushout-product

struct DerivedTensor {
  Replacement replacement;
  ChainComplex product;
  std::map<int, FpModule> homology;

  std::map<int, FpModule> nonzero() const {
    std::map<int, FpModule> out;
    for (auto& [n, h] : homology)
      if (!is_zero(h)) out.emplace(n, h);
    return out;
  }
  FpModule at(int n) const {
    auto it = homology.find(n);
    return it == homology.end() ? FpModule::zero(product.ring()) : it->second;
  }
};

inline DerivedTensor derived_tensor(const ChainComplex& X, const ChainComplex& Y, const ModelStructureSpec& spec) {
  if (spec.id == StructureId::Injective) throw PreconditionFailed("derived_tensor needs the projective or flat structure");
  require_same_ring(X.ring(), Y.ring(), "derived_tensor");
  Replacement rep = cofibrant_replacement(X, spec);
  ChainComplex T = tensor_complexes(rep.object, Y);
  DerivedTensor out{rep, T, {}};
  for (int n = T.lo(); n <= T.hi(); ++n) out.homology.emplace(n, homology(T, n));
  return out;
}

/// Map from the pushout of (f (x) C, A (x) g) to B (x) D.
inline ChainMap pushout_product(const ChainMap& f, const ChainMap& g) {
  require_same_ring(f.source().ring(), g.source().ring(), "pushout_product");
  const ChainComplex &A = f.source(), &B = f.target(), &C = g.source(), &D = g.target();
  ChainMap fC = tensor_chainmaps(f, ChainMap::identity(C));
  ChainMap Ag = tensor_chainmaps(ChainMap::identity(A), g);
  Pushout po = pushout_chainmaps(fC, Ag);
  ChainMap u = tensor_chainmaps(ChainMap::identity(B), g);
  ChainMap v = tensor_chainmaps(f, ChainMap::identity(D));
  std::map<int, Matrix> c;
  for (int n = po.object.lo(); n <= po.object.hi(); ++n) c[n] = Matrix::hcat(u.matrix(n), v.matrix(n));
  return ChainMap(po.object, u.target(), c);
}

// ---------------------------------------------------------------------------
// Axiom harnesses

struct CheckResult {
  std::string name;
  std::size_t passed = 0, failed = 0;
  std::vector<std::string> witnesses;

  bool ok() const { return failed == 0; }
  void record(bool ok, const std::string& witness = "") {
    if (ok) {
      ++passed;
      return;
    }
    ++failed;
    if (witnesses.size() < 3 && !witness.empty()) witnesses.push_back(witness);
  }
};

namespace detail {

class Checks {
 public:
  CheckResult& operator[](const std::string& name) {
    for (auto& c : list_)
      if (c.name == name) return c;
    list_.push_back({name, 0, 0, {}});
    return list_.back();
  }
  /// Runs fn, recording an exception as a failure of `name`.
  template <class Fn>
  void guard(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      (*this)[name].record(false, e.what());
    }
  }
  std::vector<CheckResult> sorted() const {
    auto out = list_;
    std::sort(out.begin(), out.end(), [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return out;
  }

 private:
  std::vector<CheckResult> list_;
};

inline std::string flags_str(const MapClass& c) {
  std::string s;
  s += c.weq ? "W" : "-";
  s += c.cof ? "C" : "-";
  s += c.fib ? "F" : "-";
  s += c.triv_cof ? "c" : "-";
  s += c.triv_fib ? "f" : "-";
  return s;
}

/// Maps that are zero on the image of i, built from Hom(coker i, Y).
inline ChainMap random_map_killing(Rng& rng, const ChainMap& i, const ChainComplex& Y) {
  ChainMap q = cokernel(i);
  return compose(random_chain_map(rng, q.target(), Y), q);
}

inline ChainMap add_maps(const ChainMap& f, const ChainMap& g) {
  std::map<int, Matrix> c;
  auto [lo, hi] = joint_range(f.source(), f.target());
  for (int n = lo; n <= hi; ++n) c[n] = f.matrix(n) + g.matrix(n);
  return ChainMap(f.source(), f.target(), c);
}

}  // namespace detail

/// Seeded property checks of the model axioms on bounded complexes.
inline std::vector<CheckResult> check_model_axioms(const ModelStructureSpec& spec, std::uint64_t seed, std::size_t samples,
                                                   std::vector<Factorization>* emitted = nullptr) {
  if (samples < 1) throw PreconditionFailed("check_model_axioms: samples must be >= 1");
  spec.validate();
  const Ring& r = spec.ring;
  Rng rng(seed);
  detail::Checks checks;
  // pre-generate all inputs from the seed
  struct Sample {
    ChainMap f, g, h, u, w1, w2;
  };
  std::vector<Sample> pool;
  for (std::size_t k = 0; k < samples; ++k) {
    ChainComplex X = random_complex(rng, r, 3, 2), Y = random_complex(rng, r, 3, 2), Z = random_complex(rng, r, 3, 2);
    Sample s;
    s.f = random_chain_map(rng, X, Y);
    s.g = random_chain_map(rng, Y, Z);
    s.h = random_chain_map(rng, Z, X);
    pool.push_back(s);
  }
  for (std::size_t k = 0; k < pool.size(); ++k) {
    Sample& s = pool[k];
    std::string tag = "sample " + std::to_string(k);
    checks.guard("factorization", [&] {
      for (FactorMode mode : {FactorMode::CofThenTrivFib, FactorMode::TrivCofThenFib}) {
        Factorization fz = factor_map(s.f, mode, spec);
        checks["factorization"].record(fz.revalidate(spec), tag + " " + factor_mode_name(mode));
        MapClass ci = classify_map(fz.i, spec), cp = classify_map(fz.p, spec), cf = classify_map(s.f, spec);
        // two out of three on (i, p, p i)
        int w = ci.weq + cp.weq + cf.weq;
        checks["two-of-three"].record(w != 2, tag + " " + factor_mode_name(mode));
        if (emitted) emitted->push_back(fz);
        // lifting against the other half of a second factorization
        ChainMap f2 = s.g;
        Factorization other = factor_map(f2, mode == FactorMode::CofThenTrivFib ? FactorMode::TrivCofThenFib : FactorMode::CofThenTrivFib, spec);
        if (emitted) emitted->push_back(other);
        const ChainMap& li = mode == FactorMode::CofThenTrivFib ? fz.i : other.i;
        const ChainMap& lp = mode == FactorMode::CofThenTrivFib ? fz.p : other.p;
        ChainMap h0 = random_chain_map(rng, li.target(), lp.source());
        ChainMap top = compose(h0, li);
        ChainMap bottom = compose(lp, h0);
        ChainMap wdel = detail::random_map_killing(rng, li, lp.target());
        // perturb the bottom only when the perturbation lifts through p degreewise
        ChainMap pert = detail::add_maps(bottom, wdel);
        LiftProblem prob{li, lp, top, pert};
        bool ok = true;
        std::string why;
        MapClass cli = classify_map(li, spec), clp = classify_map(lp, spec);
        if ((cli.cof && clp.triv_fib) || (cli.triv_cof && clp.fib)) {
          try {
            solve_lifting(prob, spec);
          } catch (const Error& e) {
            ok = false;
            why = e.what();
          }
        }
        checks["lifting"].record(ok, tag + " " + factor_mode_name(mode) + ": " + why);
      }
    });
    checks.guard("two-of-three", [&] {
      ChainMap gf = compose(s.g, s.f);
      MapClass a = classify_map(s.f, spec), b = classify_map(s.g, spec), c = classify_map(gf, spec);
      checks["two-of-three"].record(a.weq + b.weq + c.weq != 2, tag);
    });
    checks.guard("retract", [&] {
      // f is a retract of f (+) h
      ChainMap sum = direct_sum_maps(s.f, s.h);
      MapClass a = classify_map(s.f, spec), b = classify_map(sum, spec);
      bool ok = (!b.weq || a.weq) && (!b.cof || a.cof) && (!b.fib || a.fib) && (!b.triv_cof || a.triv_cof) &&
                (!b.triv_fib || a.triv_fib);
      checks["retract"].record(ok, tag + " " + detail::flags_str(b) + " vs " + detail::flags_str(a));
    });
  }
  return checks.sorted();
}

/// Seeded checks of the monoidal conditions.
inline std::vector<CheckResult> check_monoidal(const ModelStructureSpec& spec, std::uint64_t seed, std::size_t samples) {
  if (samples < 1) throw PreconditionFailed("check_monoidal: samples must be >= 1");
  if (spec.id == StructureId::Injective) throw PreconditionFailed("check_monoidal needs the projective or flat structure");
  const Ring& r = spec.ring;
  const CotorsionPairSpec& pair = spec.pair;
  Rng rng(seed);
  detail::Checks checks;
  FpModule R = FpModule::free(r, 1);
  std::vector<FpModule> left;
  for (auto& M : module_pool(r))
    if (pair.in_left(M)) left.push_back(M);

  // (1) left class members are flat
  for (auto& M : left) checks["(1) left objects flat"].record(is_flat(M), describe(M));
  // (2) closed under tensor
  for (auto& A : left)
    for (auto& B : left)
      checks["(2) left tensor left"].record(pair.in_left(tensor_modules(A, B)), describe(A) + " (x) " + describe(B));
  // (3) unit in the left class
  checks["(3) unit in left"].record(pair.in_left(R), describe(R));
  // (iv) 0 -> S^0(R) is a cofibration
  checks.guard("(iv) unit cofibrant", [&] {
    checks["(iv) unit cofibrant"].record(classify_map(ChainMap::zero(ChainComplex(r), sphere(0, R)), spec).cof, "0 -> S^0(R)");
  });

  // sampled cofibrations and cofibrant / trivially cofibrant objects
  std::vector<ChainMap> cofs = spec.I(0, 1);
  std::vector<ChainMap> tcofs = spec.J(0, 1);
  std::vector<ChainComplex> dg, tl;
  for (std::size_t k = 0; k < samples; ++k) {
    ChainComplex X = random_complex(rng, r, 2, 2), Y = random_complex(rng, r, 2, 2);
    ChainMap f = random_chain_map(rng, X, Y);
    checks.guard("sampling", [&] {
      Factorization a = factor_map(f, FactorMode::CofThenTrivFib, spec);
      Factorization b = factor_map(f, FactorMode::TrivCofThenFib, spec);
      cofs.push_back(a.i);
      tcofs.push_back(b.i);
      dg.push_back(minimal_presentation(cokernel(a.i).target()).target());
      tl.push_back(minimal_presentation(cokernel(b.i).target()).target());
    });
  }
  // (i) cofibrations are degreewise pure: i_n (x) R/(d) stays mono
  std::vector<FpModule> cyclics;
  if (r.is_finite()) {
    for (auto& d : divisors_above_one(r.modulus())) cyclics.push_back(FpModule::cyclic(r, d));
  } else {
    for (long long d = 2; d <= 6; ++d) cyclics.push_back(FpModule::cyclic(r, d));
  }
  for (std::size_t k = 0; k < cofs.size(); ++k) {
    const ChainMap& i = cofs[k];
    bool pure = true;
    std::string w;
    for (int n = i.source().lo(); n <= i.source().hi() && pure; ++n)
      for (auto& Cc : cyclics)
        if (!is_mono(tensor_maps(i.at(n), ModuleMap(Cc, Cc, Matrix::identity(r, Cc.gens()))))) {
          pure = false;
          w = "cofibration " + std::to_string(k) + " in degree " + std::to_string(n) + " against " + describe(Cc);
          break;
        }
    checks["(i) cofibrations pure"].record(pure, w);
  }
  // (ii) dg-left (x) dg-left, (iii) dg-left (x) left-tilde
  std::size_t m = std::min<std::size_t>(dg.size(), 6);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      checks.guard("(ii) dg-left tensor dg-left", [&] {
        checks["(ii) dg-left tensor dg-left"].record(
            in_complex_class(tensor_complexes(dg[a], dg[b]), ComplexClass::DgFLeft, pair), dg[a].str() + " (x) " + dg[b].str());
      });
      checks.guard("(iii) dg-left tensor left-tilde", [&] {
        checks["(iii) dg-left tensor left-tilde"].record(
            in_complex_class(tensor_complexes(dg[a], tl[b]), ComplexClass::FTilde, pair), dg[a].str() + " (x) " + tl[b].str());
      });
    }
  // pushout-product of cofibrations is a cofibration, trivial if either factor is
  std::size_t pc = std::min<std::size_t>(cofs.size(), 8);
  for (std::size_t a = 0; a < pc; ++a)
    for (std::size_t b = 0; b < pc; ++b) {
      checks.guard("pushout-product", [&] {
        ChainMap pp = pushout_product(cofs[a], cofs[b]);
        checks["pushout-product"].record(classify_map(pp, spec).cof, std::to_string(a) + " x " + std::to_string(b));
      });
      if (b < tcofs.size())
        checks.guard("pushout-product trivial", [&] {
          ChainMap pp = pushout_product(cofs[a], tcofs[b]);
          checks["pushout-product trivial"].record(classify_map(pp, spec).triv_cof, std::to_string(a) + " x " + std::to_string(b));
        });
    }
  return checks.sorted();
}

}  // namespace cotor
