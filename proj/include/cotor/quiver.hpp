#pragma once

#include <map>
#include <string>
#include <vector>

#include "cotor/kaplansky.hpp"

namespace cotor {

/// Ring homomorphism out of Z, Z/n or F_p, fixed by the image of 1.
struct RingHom {
  Ring source = Ring::integers();
  Ring target = Ring::integers();
  Int one_image = 1;

  void validate() const {
    if (target.normalize(one_image) != target.normalize(1))
      throw ValidationError("ring map " + str() + " does not send 1 to 1");
    if (source.is_finite() && !target.is_finite())
      throw ValidationError("ring map " + str() + ": no ring map from a finite ring to Z");
    if (source.is_finite() && source.modulus() % target.modulus() != 0)
      throw ValidationError("ring map " + str() + " does not respect n = 0 in the source");
  }
  /// Whether the target is flat as a module over the source.
  bool target_flat() const {
    if (!target.is_finite()) return true;
    return is_flat(FpModule::cyclic(source, target.modulus()));
  }
  std::string str() const { return source.name() + " -> " + target.name(); }
};

struct QuiverEdge {
  std::string name;
  std::size_t from = 0, to = 0;
  RingHom hom;
};

/// A finite quiver with a ring at each vertex and a ring map along each edge.
struct QuiverRep {
  std::vector<std::string> vertices;
  std::vector<Ring> rings;
  std::vector<QuiverEdge> edges;

  std::size_t vertex(const std::string& name) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i] == name) return i;
    throw ValidationError("unknown vertex " + name);
  }
  void validate() const {
    if (vertices.size() != rings.size()) throw ValidationError("one ring per vertex");
    for (auto& e : edges) {
      if (e.from >= vertices.size() || e.to >= vertices.size()) throw ValidationError("edge " + e.name + " leaves the quiver");
      if (!(e.hom.source == rings[e.from]) || !(e.hom.target == rings[e.to]))
        throw ValidationError("edge " + e.name + ": ring map does not match the vertex rings");
      e.hom.validate();
    }
  }
  bool flat_flag() const {
    for (auto& e : edges)
      if (!e.hom.target_flat()) return false;
    return true;
  }
};

/// M(v) over R(v) at each vertex; M(e) : M(v) -> M(w) as a matrix over R(w).
struct QuiverRepModule {
  QuiverRep rep;
  std::vector<FpModule> at;
  std::vector<Matrix> edge_maps;

  void validate() const {
    rep.validate();
    if (at.size() != rep.vertices.size() || edge_maps.size() != rep.edges.size())
      throw ValidationError("repmodule: one module per vertex and one map per edge");
    for (std::size_t v = 0; v < at.size(); ++v)
      if (!(at[v].ring() == rep.rings[v])) throw ValidationError("repmodule: module at " + rep.vertices[v] + " over the wrong ring");
    for (std::size_t k = 0; k < rep.edges.size(); ++k) {
      const auto& e = rep.edges[k];
      const FpModule &Mv = at[e.from], &Mw = at[e.to];
      const Matrix& A = edge_maps[k];
      if (!(A.ring() == rep.rings[e.to])) throw ValidationError("edge " + e.name + ": map must have entries in " + rep.rings[e.to].name());
      if (A.rows() != Mw.gens() || A.cols() != Mv.gens()) throw ValidationError("edge " + e.name + ": map has the wrong shape");
      // additive and well defined; linearity over R(v) follows since 1 generates R(v)
      if (!detail::in_lattice(Mw.lattice(), (A.lifted() * Mv.lattice()).lifted()))
        throw ValidationError("edge " + e.name + ": map does not respect the relations of M(" + rep.vertices[e.from] + ")");
    }
  }
  ModuleMap edge_map(std::size_t k) const {
    const auto& e = rep.edges[k];
    return ModuleMap(base_change(k), at[e.to], edge_maps[k]);
  }
  /// R(w) (x)_{R(v)} M(v) for edge k, on the generators of M(v).
  FpModule base_change(std::size_t k) const {
    const auto& e = rep.edges[k];
    const FpModule& Mv = at[e.from];
    return FpModule(rep.rings[e.to], Mv.gens(), Mv.relations().lifted().over(rep.rings[e.to]));
  }
};

struct QcVerdict {
  bool ok = true;
  std::string witness;  // failing edge
};

inline QcVerdict is_quasi_coherent(const QuiverRepModule& M) {
  M.validate();
  for (std::size_t k = 0; k < M.rep.edges.size(); ++k)
    if (!is_iso(M.edge_map(k))) return {false, M.rep.edges[k].name};
  return {};
}

inline bool is_flat_rep_module(const QuiverRepModule& M) {
  for (auto& m : M.at)
    if (!is_flat(m)) return false;
  return true;
}

struct Cardinal {
  bool infinite = false;
  Int count = 0;
  std::string str() const { return infinite ? "infinite" : to_string(count); }
};

/// |M| = size of the disjoint union of the M(v).
inline Cardinal rep_cardinality(const QuiverRepModule& M) {
  Cardinal c;
  for (auto& m : M.at) {
    Int k = cardinality(m);
    if (k == 0) return {true, 0};
    c.count += k;
  }
  return c;
}

/// Direct sum vertex by vertex.
inline QuiverRepModule rep_direct_sum(const QuiverRepModule& a, const QuiverRepModule& b) {
  QuiverRepModule out{a.rep, {}, {}};
  for (std::size_t v = 0; v < a.at.size(); ++v) out.at.push_back(direct_sum(a.at[v], b.at[v]));
  for (std::size_t k = 0; k < a.edge_maps.size(); ++k) out.edge_maps.push_back(Matrix::block_diag(a.edge_maps[k], b.edge_maps[k]));
  out.validate();
  return out;
}

struct QuiverWitness {
  QuiverRepModule sub, quotient;
  std::vector<Matrix> generators;  // S(v) in M(v) coordinates
  std::vector<std::string> certificates;

  void validate(const QuiverRepModule& M, const std::vector<Matrix>& X) const {
    auto fail = [](const std::string& w) { throw ValidationError("quiver witness: " + w); };
    if (!is_flat_rep_module(sub)) fail("S is not flat");
    if (!is_flat_rep_module(quotient)) fail("M/S is not flat");
    if (auto q = is_quasi_coherent(sub); !q.ok) fail("S is not quasi-coherent at " + q.witness);
    if (auto q = is_quasi_coherent(quotient); !q.ok) fail("M/S is not quasi-coherent at " + q.witness);
    for (std::size_t v = 0; v < M.at.size(); ++v) {
      Matrix L = Matrix::hcat(generators[v].lifted(), M.at[v].lattice());
      if (v < X.size() && X[v].cols() && !detail::in_lattice(L, X[v].lifted())) fail("X not inside S");
    }
  }
};

namespace detail {

inline bool contains(const FpModule& M, const Matrix& S, const Matrix& v) {
  return in_lattice(Matrix::hcat(S.lifted(), M.lattice()), v.lifted());
}

inline QuiverRepModule sub_rep(const QuiverRepModule& M, const std::vector<Matrix>& S) {
  QuiverRepModule out{M.rep, {}, {}};
  for (std::size_t v = 0; v < M.at.size(); ++v) out.at.push_back(present(M.rep.rings[v], S[v], M.at[v].lattice()));
  for (std::size_t k = 0; k < M.rep.edges.size(); ++k) {
    const auto& e = M.rep.edges[k];
    auto c = express_in(S[e.to], M.at[e.to].lattice(), M.edge_maps[k] * S[e.from].over(M.rep.rings[e.to]), M.rep.rings[e.to]);
    ensure(c.has_value(), "sub-representation not closed along " + e.name);
    out.edge_maps.push_back(*c);
  }
  out.validate();
  return out;
}

inline QuiverRepModule quotient_rep(const QuiverRepModule& M, const std::vector<Matrix>& S) {
  QuiverRepModule out{M.rep, {}, M.edge_maps};
  for (std::size_t v = 0; v < M.at.size(); ++v) out.at.push_back(quotient(M.at[v], S[v]).target());
  out.validate();
  return out;
}

}  // namespace detail

/// Greedy closure: vertices in input order, generators in presentation order.
inline QuiverWitness quiver_kaplansky_witness(const QuiverRepModule& M, const std::vector<Matrix>& X, const KaplanskyConfig& cfg = {}) {
  cfg.validate();
  M.validate();
  for (auto& r : M.rep.rings)
    if (!r.is_finite()) throw UnsupportedRing("quiver_kaplansky_witness needs finite vertex rings, got " + r.name());
  if (!is_flat_rep_module(M)) throw NotInClass("quiver_kaplansky_witness: M is not flat");
  if (auto q = is_quasi_coherent(M); !q.ok) throw NotInClass("quiver_kaplansky_witness: M is not quasi-coherent at " + q.witness);
  std::size_t nv = M.at.size();
  std::vector<Matrix> S(nv);
  bool seeded = false;
  for (std::size_t v = 0; v < nv; ++v) {
    S[v] = v < X.size() && X[v].cols() ? X[v].over(M.rep.rings[v]) : Matrix(M.rep.rings[v], M.at[v].gens(), 0);
    for (std::size_t j = 0; j < S[v].cols(); ++j)
      if (!element_is_zero(M.at[v], S[v].col_matrix(j))) seeded = true;
  }
  auto grow = [&](std::size_t v) {
    // next generator of M(v) outside S(v)
    for (std::size_t j = 0; j < M.at[v].gens(); ++j) {
      Matrix e = Matrix::identity(M.rep.rings[v], M.at[v].gens()).col_matrix(j);
      if (!detail::contains(M.at[v], S[v], e)) {
        S[v] = Matrix::hcat(S[v], e);
        return true;
      }
    }
    return false;
  };
  if (!seeded) {
    for (std::size_t v = 0; v < nv && !seeded; ++v) seeded = grow(v);
  }
  ClassSpec flat;
  flat.id = ClassId::Flat;
  for (std::size_t round = 0;; ++round) {
    if (round > 64 * (nv + 1)) throw BudgetExceeded("quiver_kaplansky_witness: closure did not stabilise");
    // close along edges
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k < M.rep.edges.size(); ++k) {
        const auto& e = M.rep.edges[k];
        Matrix img = M.edge_maps[k] * S[e.from].over(M.rep.rings[e.to]);
        for (std::size_t j = 0; j < img.cols(); ++j)
          if (!detail::contains(M.at[e.to], S[e.to], img.col_matrix(j))) {
            S[e.to] = Matrix::hcat(S[e.to], img.col_matrix(j));
            changed = true;
          }
      }
    }
    // flat pieces at each vertex
    bool fixed = true;
    for (std::size_t v = 0; v < nv && fixed; ++v) {
      FpModule sv = present(M.rep.rings[v], S[v], M.at[v].lattice());
      FpModule qv = quotient(M.at[v], S[v]).target();
      if (flat.contains(sv) && flat.contains(qv)) continue;
      KaplanskyWitness w = kaplansky_witness(M.at[v], S[v], flat, cfg);
      S[v] = w.inclusion.matrix();
      fixed = false;
    }
    if (!fixed) continue;
    QuiverRepModule sub = detail::sub_rep(M, S), quo = detail::quotient_rep(M, S);
    QcVerdict a = is_quasi_coherent(sub), b = is_quasi_coherent(quo);
    if (a.ok && b.ok) {
      QuiverWitness w{sub, quo, S, {}};
      w.certificates.push_back("S flat and quasi-coherent, |S| = " + rep_cardinality(sub).str());
      w.certificates.push_back("M/S flat and quasi-coherent");
      w.validate(M, X);
      return w;
    }
    const std::string& bad = a.ok ? b.witness : a.witness;
    for (std::size_t k = 0; k < M.rep.edges.size(); ++k)
      if (M.rep.edges[k].name == bad) {
        bool g = grow(M.rep.edges[k].from) || grow(M.rep.edges[k].to);
        ensure(g, "quasi-coherence fails although S = M on the edge");
        break;
      }
  }
}

}  // namespace cotor
