#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cotor/cotorsion.hpp"

namespace cotor {

struct KaplanskyConfig {
  std::size_t gamma = 3;
  std::size_t step_budget = 32;

  void validate() const {
    if (gamma < 1) throw PreconditionFailed("gamma must be >= 1");
    if (step_budget < 1) throw PreconditionFailed("step budget must be >= 1");
  }
};

/// X' <= source generated by preimages of the target generators, in order.
inline ModuleMap find_small_surjecting_sub(const ModuleMap& g, std::size_t gamma) {
  const FpModule& T = g.target();
  if (!is_epi(g)) throw PreconditionFailed("find_small_surjecting_sub: map is not epi");
  if (T.gens() > gamma)
    throw BudgetExceeded("target needs " + std::to_string(T.gens()) + " generators, gamma = " + std::to_string(gamma));
  auto pre = express_in(g.matrix(), T.lattice(), Matrix::identity(T.ring(), T.gens()), T.ring());
  ensure(pre.has_value(), "epi without preimages");
  ModuleMap inc = submodule_inclusion(g.source(), *pre);
  ensure(is_epi(compose(g, inc)), "restriction is not epi");
  return inc;
}

/// S with X <= S <= F, S and F/S in the class.
struct KaplanskyWitness {
  ModuleMap inclusion;  // S -> F, matrix = generators of S in F coordinates
  ModuleMap projection;  // F -> F/S
  std::size_t gens = 0;
  std::vector<std::string> certificates;
};

namespace detail {

/// Additive subgroups of a finite module in invariant-factor coordinates.
class FiniteLattice {
 public:
  explicit FiniteLattice(const Simplified& s) : s_(s) {
    for (auto& d : s.invariants) mods_.push_back(static_cast<long long>(d));
  }

  using Elem = std::vector<long long>;

  Elem from_column(const Matrix& v) const {
    Matrix c = s_.to * v;
    Elem e(mods_.size());
    for (std::size_t i = 0; i < mods_.size(); ++i)
      e[i] = static_cast<long long>(mod_floor(c(i, 0), Int(mods_[i])));
    return e;
  }
  Matrix to_column(const Elem& e) const {
    Matrix c(s_.module.ring(), mods_.size(), 1);
    for (std::size_t i = 0; i < mods_.size(); ++i) c.set(i, 0, e[i]);
    return s_.from * c;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = (a[i] + b[i]) % mods_[i];
    return c;
  }
  std::set<Elem> closure(const std::vector<Elem>& gens) const {
    std::set<Elem> out{Elem(mods_.size(), 0)};
    std::vector<Elem> frontier(out.begin(), out.end());
    while (!frontier.empty()) {
      std::vector<Elem> next;
      for (auto& x : frontier)
        for (auto& g : gens) {
          Elem y = add(x, g);
          if (out.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    return out;
  }
  std::vector<Elem> all() const {
    std::vector<Elem> out;
    Elem e(mods_.size(), 0);
    for (;;) {
      out.push_back(e);
      std::size_t k = 0;
      while (k < e.size()) {
        if (++e[k] < mods_[k]) break;
        e[k] = 0;
        ++k;
      }
      if (k == e.size()) break;
    }
    return out;
  }

 private:
  Simplified s_;
  std::vector<long long> mods_;
};

inline KaplanskyWitness make_witness(const FpModule& F, const Matrix& S, const ClassSpec& cls) {
  ModuleMap inc = submodule_inclusion(F, S);
  ModuleMap proj = quotient(F, S);
  KaplanskyWitness w{inc, proj, S.cols(), {}};
  w.certificates.push_back("S = " + describe(inc.source()) + " in " + cls.name());
  w.certificates.push_back("F/S = " + describe(proj.target()) + " in " + cls.name());
  return w;
}

}  // namespace detail

/// Witness over Z: the saturation of X in the free module F (nonzero when X = 0).
/// Over a finite ring: the smallest submodule containing X with S and F/S in the class,
/// found by exhaustive search in canonical order.
inline KaplanskyWitness kaplansky_witness(const FpModule& F, const Matrix& X, const ClassSpec& cls,
                                          const KaplanskyConfig& cfg = {}) {
  cfg.validate();
  const Ring& r = F.ring();
  if (!cls.contains(F)) throw NotInClass("kaplansky_witness: " + describe(F) + " is not in " + cls.name());
  bool want_nonzero = !is_zero(F);
  if (!r.is_finite()) {
    if (cls.id != ClassId::Projective && cls.id != ClassId::Flat)
      throw UnsupportedRing("kaplansky_witness over Z supports the projective and flat classes only");
    Simplified s = simplify(F);
    std::size_t k = s.module.gens();
    Matrix Xs = (s.to * X.over(r));
    Matrix basis(r, k, 0);
    if (Xs.cols() && !Xs.is_zero()) {
      detail::IntSmith sm(Xs, false, true, false);
      basis = sm.Uinv().col_range(0, sm.rank);
    } else if (want_nonzero) {
      basis = Matrix::identity(r, k).col_range(0, 1);
    }
    KaplanskyWitness w = detail::make_witness(F, s.from * basis, cls);
    ensure(cls.contains(w.inclusion.source()) && cls.contains(w.projection.target()), "saturation left the class");
    ensure(detail::in_lattice(Matrix::hcat(w.inclusion.matrix().lifted(), F.lattice()), X.lifted()), "X not inside S");
    return w;
  }
  Simplified s = simplify(F);
  detail::FiniteLattice lat(s);
  std::vector<detail::FiniteLattice::Elem> seed;
  for (std::size_t j = 0; j < X.cols(); ++j) seed.push_back(lat.from_column(X.col_matrix(j)));
  auto everything = lat.all();
  // Breadth-first over subgroups containing X; discovery order is canonical.
  std::vector<std::pair<std::set<detail::FiniteLattice::Elem>, std::vector<detail::FiniteLattice::Elem>>> found;
  std::set<std::set<detail::FiniteLattice::Elem>> seen;
  auto start = lat.closure(seed);
  found.push_back({start, seed});
  seen.insert(start);
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found.size() > 4096) throw BudgetExceeded("kaplansky_witness: too many submodules");
    for (auto& e : everything) {
      if (found[i].first.count(e)) continue;
      auto gens = found[i].second;
      gens.push_back(e);
      auto c = lat.closure(gens);
      if (seen.insert(c).second) found.push_back({c, gens});
    }
  }
  std::vector<std::size_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return found[a].first.size() < found[b].first.size(); });
  for (std::size_t i : order) {
    if (want_nonzero && found[i].first.size() == 1) continue;
    Matrix S(r, F.gens(), 0);
    for (auto& e : found[i].second) S = Matrix::hcat(S, lat.to_column(e));
    if (S.cols() == 0) S = Matrix(r, F.gens(), 0);
    ModuleMap inc = submodule_inclusion(F, S);
    if (!cls.contains(inc.source())) continue;
    if (!cls.contains(quotient(F, S).target())) continue;
    return detail::make_witness(F, S, cls);
  }
  throw InternalError("kaplansky_witness: F itself should qualify");
}

/// A -> X_1 -> ... -> X_k = B, stages given by generators in B coordinates.
struct FiltrationChain {
  FpModule ambient;
  std::vector<Matrix> stages;
  std::vector<FpModule> quotients;
  ClassSpec cls;

  std::size_t length() const { return quotients.size(); }

  /// Re-checks inclusions, class membership of the quotients and that the top is B.
  void validate(std::size_t gamma) const {
    const FpModule& B = ambient;
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
      Matrix L = Matrix::hcat(stages[i + 1].lifted(), B.lattice());
      if (!detail::in_lattice(L, stages[i].lifted())) throw ValidationError("filtration stages are not nested");
      FpModule q = present(B.ring(), stages[i + 1], Matrix::hcat(stages[i].lifted(), B.lattice()));
      if (!isomorphic(q, quotients[i])) throw ValidationError("recorded quotient does not match");
      if (!cls.contains(q)) throw ValidationError("quotient " + describe(q) + " not in " + cls.name());
      if (simplify(q).module.gens() > gamma) throw ValidationError("quotient " + describe(q) + " exceeds gamma");
    }
    if (!stages.empty() && !is_zero(quotient(B, stages.back()).target()))
      throw ValidationError("filtration does not reach the ambient module");
  }
};

/// Filtration from A to B with class quotients, one witness per step.
inline FiltrationChain kaplansky_filtration(const ModuleMap& incl, const ClassSpec& cls, const KaplanskyConfig& cfg = {}) {
  cfg.validate();
  if (!is_mono(incl)) throw PreconditionFailed("kaplansky_filtration: A -> B is not mono");
  const FpModule& B = incl.target();
  const Ring& r = B.ring();
  if (!cls.contains(cokernel(incl).target())) throw NotInClass("kaplansky_filtration: B/A not in " + cls.name());
  FiltrationChain ch{B, {incl.matrix()}, {}, cls};
  for (std::size_t step = 0;; ++step) {
    ModuleMap q = quotient(B, ch.stages.back());
    const FpModule& Q = q.target();
    if (is_zero(Q)) break;
    if (step >= cfg.step_budget)
      throw BudgetExceeded("kaplansky_filtration: " + std::to_string(step) + " steps, top not reached");
    // seed: the first generators that are nonzero in Q, at most gamma of them
    Matrix seed(r, Q.gens(), 0);
    for (std::size_t j = 0; j < Q.gens() && seed.cols() < 1; ++j) {
      Matrix e = Matrix::identity(r, Q.gens()).col_matrix(j);
      if (!element_is_zero(Q, e)) seed = Matrix::hcat(seed, e);
    }
    KaplanskyWitness w = kaplansky_witness(Q, seed, cls, cfg);
    ch.stages.push_back(Matrix::hcat(ch.stages.back(), w.inclusion.matrix()));
    ch.quotients.push_back(w.inclusion.source());
  }
  ch.validate(std::max<std::size_t>(cfg.gamma, 1));
  return ch;
}

// ---------------------------------------------------------------------------
// Flat subcomplex envelope

struct Envelope {
  ChainMap inclusion;  // S -> F
  std::map<int, Matrix> cycles;  // generators of Z_n S in F_n coordinates
  std::size_t max_gens = 0;
  std::vector<std::string> certificates;
};

/// Exact S with X <= S <= F and Z_n S, Z_n F / Z_n S in the left class, for F in F~.
inline Envelope flat_subcomplex_envelope(const ChainComplex& F, const std::map<int, Matrix>& X,
                                         const CotorsionPairSpec& pair, const KaplanskyConfig& cfg = {}) {
  cfg.validate();
  const Ring& r = F.ring();
  auto fcert = complex_class_member(F, ComplexClass::FTilde, pair);
  if (!fcert.member) throw NotInClass("flat_subcomplex_envelope: F not in F~ (" + fcert.witness + ")");
  auto Xn = [&](int n) {
    auto it = X.find(n);
    return it == X.end() ? Matrix(r, F.obj(n).gens(), 0) : it->second.over(r);
  };
  // X must be a subcomplex
  for (int n = F.lo(); n <= F.hi(); ++n)
    if (F.obj(n - 1).gens() && Xn(n).cols() && !detail::in_lattice(Matrix::hcat(Xn(n - 1).lifted(), F.obj(n - 1).lattice()), (F.d(n) * Xn(n)).lifted()))
      throw PreconditionFailed("flat_subcomplex_envelope: X is not closed under d in degree " + std::to_string(n));

  bool need_nonzero = !F.empty();
  for (auto& [n, m] : X)
    if (!m.is_zero() && !element_is_zero(F.obj(n), m)) need_nonzero = false;

  std::map<int, Matrix> S, C;
  Matrix prevC(r, 0, 0);
  for (int n = F.lo(); n <= F.hi() + 1; ++n) {
    const FpModule Fn = F.obj(n);
    // P_n: preimages of the generators of C_{n-1}
    Matrix P(r, Fn.gens(), 0);
    if (C.count(n - 1) && C[n - 1].cols()) {
      auto pre = express_in(F.d(n), F.obj(n - 1).lattice(), C[n - 1], r);
      ensure(pre.has_value(), "cycle without preimage in an exact complex");
      P = *pre;
    }
    Matrix T = Matrix::hcat(P, Xn(n));
    // seed: cycles of T plus boundaries of X_{n+1}
    Matrix seed = F.d(n + 1) * Xn(n + 1);
    if (T.cols()) {
      Matrix kT = kernel_generators(ModuleMap(FpModule::free(r, T.cols()), F.obj(n - 1), F.d(n) * T));
      if (kT.cols()) seed = Matrix::hcat(T * kT, seed);
    }
    Matrix Zgen = cycles(F, n);
    FpModule Zn = present(r, Zgen, Fn.lattice());
    Matrix Cn(r, Fn.gens(), 0);
    if (!is_zero(Zn)) {
      auto seedZ = express_in(Zgen, Fn.lattice(), seed, r);
      ensure(seedZ.has_value(), "seed outside the cycles");
      bool seed_zero = detail::in_lattice(Zn.lattice(), seedZ->lifted());
      if (!seed_zero || need_nonzero) {
        KaplanskyWitness w = kaplansky_witness(Zn, *seedZ, pair.left, cfg);
        Cn = Zgen * w.inclusion.matrix();
        need_nonzero = false;
      }
    }
    C[n] = Cn;
    S[n] = Matrix::hcat(T, Cn);
  }
  ChainMap inc = subcomplex_inclusion(F, S);
  const ChainComplex& Sc = inc.source();
  Envelope env{inc, C, 0, {}};
  for (int n = Sc.lo(); n <= Sc.hi(); ++n) env.max_gens = std::max(env.max_gens, Sc.obj(n).gens());
  ensure(is_exact(Sc), "envelope is not exact");
  for (int n = F.lo(); n <= F.hi(); ++n) {
    ensure(detail::in_lattice(Matrix::hcat(S[n].lifted(), F.obj(n).lattice()), Xn(n).lifted()), "X not inside S");
    FpModule zs = present(r, C[n], F.obj(n).lattice());
    FpModule zq = present(r, cycles(F, n), Matrix::hcat(C[n].lifted(), F.obj(n).lattice()));
    ensure(pair.in_left(zs) && pair.in_left(zq), "cycle quotients left the class");
    // Z_n S is exactly C_n
    ensure(isomorphic(cycle_module(Sc, n), zs), "Z_n S differs from the chosen witness");
  }
  env.certificates.push_back("S exact");
  env.certificates.push_back("Z_n S and Z_n F / Z_n S in " + pair.left.name());
  return env;
}

// ---------------------------------------------------------------------------
// I-cell decomposition

enum class CellKind { Sphere, Disk };

struct Cell {
  CellKind kind;
  int degree;
  ChainMap generating;  // S^{n-1}(R) -> D^n(R) or 0 -> D^n(R)
  ChainMap attaching;   // source of `generating` -> previous stage
};

/// A = X_0 -> X_1 -> ... -> X_m -iso-> B, each step a pushout of a generating mono.
struct CellChain {
  ChainMap original;
  std::vector<ChainComplex> stages;
  std::vector<ChainMap> steps;
  std::vector<Cell> cells;
  ChainMap to_target;

  ChainMap composite() const {
    ChainMap c = ChainMap::identity(stages.front());
    for (auto& s : steps) c = compose(s, c);
    return compose(to_target, c);
  }

  /// Bit-exact reproduction of the original map.
  bool composes_exactly() const {
    ChainMap c = composite();
    const ChainComplex& A = original.source();
    for (int n = A.lo(); n <= A.hi(); ++n)
      if (!(c.matrix(n) == original.matrix(n))) return false;
    return c.source() == original.source() && c.target() == original.target();
  }

  /// Each stage is the pushout of its cell along the attaching map.
  bool cells_are_pushouts() const {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const Cell& c = cells[j];
      Pushout po = pushout_chainmaps(c.generating, c.attaching);
      const ChainComplex& next = stages[j + 1];
      // canonical map P -> X_{j+1} induced by the cell's image and the step
      std::map<int, Matrix> u;
      auto [lo, hi] = joint_range(po.object, next);
      for (int n = lo; n <= hi; ++n) {
        Matrix D = cell_image(j, n);
        u[n] = Matrix::hcat(D, steps[j].matrix(n));
      }
      ChainMap canon(po.object, next, u);
      if (!is_iso(canon)) return false;
      if (!maps_equal(compose(canon, po.from_right), steps[j])) return false;
    }
    return true;
  }

  /// Image of the generating disk of cell j in stage j+1, degree n.
  Matrix cell_image(std::size_t j, int n) const {
    const Cell& c = cells[j];
    const ChainComplex& next = stages[j + 1];
    const Ring& r = next.ring();
    std::size_t g = next.obj(n).gens();
    std::size_t prev = stages[j].obj(n).gens();
    const ChainComplex& D = c.generating.target();
    Matrix m(r, g, D.obj(n).gens());
    if (D.obj(n).gens() == 0) return m;
    if (n == c.degree) {
      m.set(prev, 0, 1);  // the new generator is appended last
    } else if (n == c.degree - 1) {
      if (c.kind == CellKind::Sphere) {
        m.paste(0, 0, steps[j].matrix(n) * c.attaching.matrix(n));
      } else {
        m.set(prev, 0, 1);
      }
    }
    return m;
  }
};

namespace detail {

inline bool free_with_basis(const FpModule& M, Matrix& basis) {
  Simplified s = simplify(M);
  const Ring& r = M.ring();
  for (auto& d : s.invariants) {
    if (!r.is_finite() && d != 0) return false;
    if (r.is_finite() && d != r.modulus()) return false;
  }
  basis = s.from;
  return true;
}

}  // namespace detail

/// Decomposes a mono f : A -> B into cells. Disk cells when coker f is in F~,
/// sphere cells when coker f is a bounded complex with free entries.
inline CellChain icell_decompose(const ChainMap& f, const CotorsionPairSpec& pair, const KaplanskyConfig& cfg = {}) {
  cfg.validate();
  if (!is_mono(f)) throw PreconditionFailed("icell_decompose: map is not mono");
  const ChainComplex& A = f.source();
  const ChainComplex& B = f.target();
  const Ring& r = B.ring();
  ChainMap q = cokernel(f);
  const ChainComplex& C = q.target();
  bool disks = in_complex_class(C, ComplexClass::FTilde, pair);
  if (!disks && !in_complex_class(C, ComplexClass::DgFLeft, pair))
    throw CertificateMissing("icell_decompose: cokernel is neither in F~ nor dg-F~");

  // New generators (in B coordinates) grouped into cells.
  struct Pending {
    CellKind kind;
    int degree;
    Matrix top;     // in B_degree
  };
  std::vector<Pending> todo;
  if (disks) {
    for (int k = C.lo(); k <= C.hi() + 1; ++k) {
      FpModule Zk = cycle_module(C, k - 1);
      if (is_zero(Zk)) continue;
      Matrix basis;
      if (!detail::free_with_basis(Zk, basis)) throw CertificateMissing("cycle module " + describe(Zk) + " is not free");
      Matrix z = cycles(C, k - 1) * basis;
      auto w = express_in(C.d(k), C.obj(k - 1).lattice(), z, r);
      ensure(w.has_value(), "exact cokernel without preimages");
      for (std::size_t j = 0; j < w->cols(); ++j) todo.push_back({CellKind::Disk, k, w->col_matrix(j)});
    }
  } else {
    for (int k = C.lo(); k <= C.hi(); ++k) {
      Matrix basis;
      if (!detail::free_with_basis(C.obj(k), basis))
        throw CertificateMissing("cokernel entry " + describe(C.obj(k)) + " is not free");
      for (std::size_t j = 0; j < basis.cols(); ++j) todo.push_back({CellKind::Sphere, k, basis.col_matrix(j)});
    }
  }
  if (todo.size() > cfg.step_budget * 64) throw BudgetExceeded("icell_decompose: too many cells");

  CellChain ch;
  ch.original = f;
  ch.stages.push_back(A);
  std::map<int, Matrix> G;  // current generators in B coordinates
  auto [lo, hi] = joint_range(A, B);
  for (int n = lo - 1; n <= hi + 1; ++n) G[n] = f.matrix(n);
  auto stage_of = [&](const std::map<int, Matrix>& gens) { return subcomplex_inclusion(B, gens).source(); };
  FpModule R = FpModule::free(r, 1);
  for (auto& p : todo) {
    ChainComplex prev = ch.stages.back();
    std::map<int, Matrix> nextG = G;
    ChainMap gen, att;
    int k = p.degree;
    if (p.kind == CellKind::Disk) {
      nextG[k] = Matrix::hcat(nextG[k], p.top);
      nextG[k - 1] = Matrix::hcat(nextG[k - 1], B.d(k) * p.top);
      gen = ChainMap::zero(ChainComplex(r), disk(k, R));
      att = ChainMap::zero(ChainComplex(r), prev);
    } else {
      nextG[k] = Matrix::hcat(nextG[k], p.top);
      auto phi = express_in(G[k - 1], B.obj(k - 1).lattice(), B.d(k) * p.top, r);
      ensure(phi.has_value(), "boundary of a new cell is not in the previous stage");
      gen = sphere_disk_sequence(k, R).first;
      att = ChainMap(sphere(k - 1, R), prev, {{k - 1, *phi}});
    }
    ChainComplex next = stage_of(nextG);
    std::map<int, Matrix> step;
    for (int n = next.lo(); n <= next.hi(); ++n) {
      Matrix m(r, next.obj(n).gens(), prev.obj(n).gens());
      m.paste(0, 0, Matrix::identity(r, prev.obj(n).gens()));
      step[n] = m;
    }
    ch.steps.push_back(ChainMap(prev, next, step));
    ch.cells.push_back({p.kind, k, gen, att});
    ch.stages.push_back(next);
    G = nextG;
  }
  std::map<int, Matrix> fin;
  const ChainComplex& last = ch.stages.back();
  for (int n = last.lo(); n <= last.hi(); ++n) fin[n] = G[n];
  ch.to_target = ChainMap(last, B, fin);
  ensure(is_iso(ch.to_target), "cells do not exhaust the target");
  ensure(ch.composes_exactly(), "cell chain does not compose to f");
  return ch;
}

}  // namespace cotor
