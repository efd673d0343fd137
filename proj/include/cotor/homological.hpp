#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cotor/module.hpp"

namespace cotor {

/// ker(b) / im(a) for A -a-> B -b-> C with b a = 0, presented on the kernel generators.
inline FpModule homology_at(const ModuleMap& a, const ModuleMap& b) {
  const FpModule& B = b.source();
  Matrix K = kernel_generators(b);
  return present(B.ring(), K, Matrix::hcat(a.matrix().lifted(), B.lattice()));
}

/// A free resolution ... -> F_1 -> F_0 -> M -> 0.
///
/// differentials[i] is d_{i+1} : F_{i+1} -> F_i; the augmentation F_0 -> M is the
/// identity on generators.
struct FreeResolution {
  FpModule module;
  std::vector<std::size_t> ranks;
  std::vector<Matrix> differentials;

  FpModule term(std::size_t i) const {
    return FpModule::free(module.ring(), i < ranks.size() ? ranks[i] : 0);
  }
  /// d_i : F_i -> F_{i-1}; d_0 is the zero map to the empty free module.
  Matrix d(std::size_t i) const {
    const Ring& r = module.ring();
    if (i == 0) return Matrix(r, 0, term(0).gens());
    if (i - 1 < differentials.size()) return differentials[i - 1];
    return Matrix(r, term(i - 1).gens(), term(i).gens());
  }
  std::vector<ModuleMap> maps() const {
    std::vector<ModuleMap> out;
    out.emplace_back(term(0), module, Matrix::identity(module.ring(), module.gens()));
    for (std::size_t i = 1; i < ranks.size(); ++i) out.emplace_back(term(i), term(i - 1), d(i));
    return out;
  }
};

/// Syzygy iteration up to F_length. Over Z the result has length <= 1.
inline FreeResolution free_resolution(const FpModule& M, std::size_t length) {
  const Ring& r = M.ring();
  FreeResolution res{M, {M.gens()}, {}};
  // F_1 -> F_0: a generating set of the relation module.
  Matrix cur = M.relations().cols() ? span_basis(M.relations()) : M.relations();
  for (std::size_t i = 1; i <= length; ++i) {
    if (cur.cols() == 0) break;
    res.ranks.push_back(cur.cols());
    res.differentials.push_back(cur);
    cur = kernel_basis(cur);
  }
  if (!r.is_finite()) ensure(res.ranks.size() <= 2, "resolution over Z longer than 1");
  return res;
}

/// Ext^n(M, N) = H^n Hom(F_*, N).
inline FpModule ext_n(const FpModule& M, const FpModule& N, std::size_t n) {
  require_same_ring(M.ring(), N.ring(), "ext_n");
  const Ring& r = M.ring();
  FreeResolution res = free_resolution(M, n + 1);
  std::size_t g = N.gens();
  auto homF = [&](std::size_t i) { return power(N, res.term(i).gens()); };
  auto coboundary = [&](std::size_t i) {
    // Hom(F_i, N) -> Hom(F_{i+1}, N), phi |-> phi d_{i+1}; vec is column-major.
    Matrix d = res.d(i + 1);
    return ModuleMap(homF(i), homF(i + 1), Matrix::kron(d.transpose(), Matrix::identity(r, g)));
  };
  ModuleMap into = n == 0 ? ModuleMap::zero(FpModule::zero(r), homF(0)) : coboundary(n - 1);
  return homology_at(into, coboundary(n));
}

/// Tor_n(M, N) = H_n(F_* (x) N).
inline FpModule tor_n(const FpModule& M, const FpModule& N, std::size_t n) {
  require_same_ring(M.ring(), N.ring(), "tor_n");
  const Ring& r = M.ring();
  FreeResolution res = free_resolution(M, n + 1);
  std::size_t g = N.gens();
  auto chains = [&](std::size_t i) { return power(N, res.term(i).gens()); };
  auto boundary = [&](std::size_t i) {
    // F_i (x) N -> F_{i-1} (x) N, block index (free generator, N generator).
    return ModuleMap(chains(i), i == 0 ? FpModule::zero(r) : chains(i - 1),
                     i == 0 ? Matrix(r, 0, chains(0).gens()) : Matrix::kron(res.d(i), Matrix::identity(r, g)));
  };
  return homology_at(boundary(n + 1), boundary(n));
}

/// M (x) N with generator (a, b) at index a * N.gens + b.
inline FpModule tensor_modules(const FpModule& M, const FpModule& N) {
  require_same_ring(M.ring(), N.ring(), "tensor_modules");
  const Ring& r = M.ring();
  Matrix rels = Matrix::hcat(Matrix::kron(M.relations(), Matrix::identity(r, N.gens())),
                             Matrix::kron(Matrix::identity(r, M.gens()), N.relations()));
  return FpModule(r, M.gens() * N.gens(), rels);
}

inline ModuleMap tensor_maps(const ModuleMap& f, const ModuleMap& g) {
  return {tensor_modules(f.source(), g.source()), tensor_modules(f.target(), g.target()),
          Matrix::kron(f.matrix(), g.matrix())};
}

namespace detail {
/// The canonical epi R^g -> M splits. Slow on large presentations.
inline bool cover_splits(const FpModule& M) {
  ModuleMap cover(FpModule::free(M.ring(), M.gens()), M, Matrix::identity(M.ring(), M.gens()));
  return find_section(cover).has_value();
}
}  // namespace detail

/// Over Z only free modules; over Z/n, M = sum Z/d is projective iff gcd(d, n/d) = 1 for each d.
inline bool is_projective(const FpModule& M) {
  const Ring& r = M.ring();
  for (auto& d : invariant_factors(M)) {
    if (!r.is_finite()) {
      if (d != 0) return false;
    } else if (boost::multiprecision::gcd(d, Int(r.modulus() / d)) != 1) {
      return false;
    }
  }
  return true;
}

/// Principal ideals (d) used for the Tor test: every divisor of n over Z/n.
inline std::vector<Int> principal_generators(const Ring& r, const Int& integer_bound = 12) {
  std::vector<Int> out;
  if (r.is_finite()) {
    for (Int d = 1; d <= r.modulus(); ++d)
      if (r.modulus() % d == 0) out.push_back(d);
  } else {
    for (Int d = 0; d <= integer_bound; ++d) out.push_back(d);
  }
  return out;
}

/// Finitely presented flat = projective. On finite rings the answer is
/// cross-checked against Tor_1(M, R/(d)) = 0 for every principal ideal.
inline bool is_flat(const FpModule& M) {
  bool proj = is_projective(M);
  if (M.ring().is_finite()) {
    bool tor_vanishes = true;
    for (auto& d : principal_generators(M.ring()))
      if (!is_zero(tor_n(M, FpModule::cyclic(M.ring(), d), 1))) tor_vanishes = false;
    ensure(tor_vanishes == proj, "flat/projective cross-check failed for " + M.str());
  }
  return proj;
}

/// Over a quasi-Frobenius ring injective = projective. Over Z no nonzero
/// finitely generated module is injective, so the question is refused.
inline bool is_injective(const FpModule& M) {
  if (!M.ring().is_quasi_frobenius())
    throw UnsupportedRing("is_injective needs a quasi-Frobenius ring, got " + M.ring().name());
  return is_projective(M);
}

/// A -i-> B -p-> C with i mono, p epi and im i = ker p, all checked on construction.
class ShortExactSeq {
 public:
  ShortExactSeq(ModuleMap i, ModuleMap p) : i_(std::move(i)), p_(std::move(p)) {
    if (!(i_.target() == p_.source())) throw ValidationError("short exact sequence: target(i) != source(p)");
    if (!is_mono(i_)) throw ValidationError("short exact sequence: i is not mono");
    if (!is_epi(p_)) throw ValidationError("short exact sequence: p is not epi");
    if (!is_zero_map(compose(p_, i_))) throw ValidationError("short exact sequence: p i != 0");
    const FpModule& B = i_.target();
    if (!detail::in_lattice(Matrix::hcat(i_.matrix().lifted(), B.lattice()), kernel_generators(p_).lifted()))
      throw ValidationError("short exact sequence: ker p not contained in im i");
  }

  const ModuleMap& mono() const { return i_; }
  const ModuleMap& epi() const { return p_; }

 private:
  ModuleMap i_, p_;
};

/// Solves X with sum of left_k X right_k == rhs in `target`, X a map between given modules.
/// Used for the unique-factorization steps of pullback/pushout arguments.
struct MapEquation {
  Matrix left;
  Matrix right;
  Matrix rhs;
  FpModule target;
};

inline std::optional<ModuleMap> solve_map(const FpModule& from, const FpModule& to, const std::vector<MapEquation>& eqs) {
  const Ring& r = from.ring();
  LinearSystem sys(r);
  auto x = sys.add_unknown(to.gens(), from.gens());
  sys.add_constraint({{Matrix::identity(r, to.gens()), x, from.relations()}}, Matrix(r, to.gens(), from.relations().cols()),
                     to.lattice());
  for (auto& e : eqs) sys.add_constraint({{e.left, x, e.right}}, e.rhs, e.target.lattice());
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  return ModuleMap(from, to, (*sol)[0]);
}

/// Lift in a square A -f-> L, B -g-> M over rows A -i-> B -p-> C and K -j-> L -q-> M.
///
/// Follows the pullback construction: Z = B x_M L, T = coker(A -> Z),
/// a section n of T -> C, the induced B -> Z, then projection to L.
inline ModuleMap lift_through(const ModuleMap& f, const ModuleMap& g, const ShortExactSeq& top_row,
                              const ShortExactSeq& bottom_row) {
  const ModuleMap& i = top_row.mono();
  const ModuleMap& p = top_row.epi();
  const ModuleMap& j = bottom_row.mono();
  const ModuleMap& q = bottom_row.epi();
  if (!(f.source() == i.source() && f.target() == q.source() && g.source() == i.target() && g.target() == q.target()))
    throw PreconditionFailed("lift_through: square does not fit the rows");
  if (!maps_equal(compose(q, f), compose(g, i))) throw PreconditionFailed("lift_through: square does not commute");
  const FpModule& C = p.target();
  const FpModule& K = j.source();
  if (!is_zero(ext_n(C, K, 1))) throw PreconditionFailed("lift_through: Ext^1(C, K) != 0");

  const Ring& r = f.source().ring();
  const FpModule& B = i.target();
  const FpModule& L = q.source();
  std::size_t gb = B.gens(), gl = L.gens();
  FpModule BL = direct_sum(B, L);
  // Z = ker (-g q) : B (+) L -> M
  ModuleMap minus_g_q(BL, g.target(), Matrix::hcat(-g.matrix(), q.matrix()));
  Matrix zgens = kernel_generators(minus_g_q);
  FpModule Zm = present(r, zgens, BL.lattice());
  Matrix projB = zgens.row_range(0, gb);
  Matrix projL = zgens.row_range(gb, gb + gl);
  // iota~ = (i; f) : A -> Z in Z-generator coordinates
  auto iota = express_in(zgens, BL.lattice(), Matrix::vcat(i.matrix(), f.matrix()), r);
  ensure(iota.has_value(), "lift_through: (i, f) does not land in the pullback");
  ModuleMap to_T = quotient(Zm, *iota);
  const FpModule& T = to_T.target();
  // r : T -> C induced by p q~
  ModuleMap rmap(T, C, p.matrix() * projB);
  auto n = find_section(rmap);
  ensure(n.has_value(), "lift_through: SplittingNotFound although Ext^1(C, K) = 0");
  // n~ : B -> Z with q~ n~ = 1_B and p~ n~ = n p
  auto ntilde = solve_map(B, Zm,
                          {{projB, Matrix::identity(r, gb), Matrix::identity(r, gb), B},
                           {to_T.matrix(), Matrix::identity(r, gb), n->matrix() * p.matrix(), T}});
  ensure(ntilde.has_value(), "lift_through: pullback factorization failed");
  ModuleMap h(B, L, projL * ntilde->matrix());
  ensure(maps_equal(compose(h, i), f), "lift_through: h i != f");
  ensure(maps_equal(compose(q, h), g), "lift_through: q h != g");
  return h;
}

}  // namespace cotor
