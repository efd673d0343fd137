#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cotor/complex.hpp"

namespace cotor {

enum class ClassId { AllObjects, Projective, Flat, Injective, PerpOfFamily };

/// A class of finitely presented modules given by a membership predicate.
struct ClassSpec {
  ClassId id = ClassId::AllObjects;
  std::vector<FpModule> family;  // PerpOfFamily only
  std::size_t gamma = 3;         // generator bound for enumerations

  bool contains(const FpModule& M) const;
  std::string name() const {
    switch (id) {
      case ClassId::AllObjects: return "all";
      case ClassId::Projective: return "projective";
      case ClassId::Flat: return "flat";
      case ClassId::Injective: return "injective";
      case ClassId::PerpOfFamily: return "perp";
    }
    return "?";
  }
};

/// Ext^1(F, X) = 0 for every F in the family.
inline bool right_perp_member(const FpModule& X, const std::vector<FpModule>& family) {
  for (auto& F : family) {
    require_same_ring(F.ring(), X.ring(), "right_perp_member");
    if (!is_zero(ext_n(F, X, 1))) return false;
  }
  return true;
}

inline bool ClassSpec::contains(const FpModule& M) const {
  switch (id) {
    case ClassId::AllObjects: return true;
    case ClassId::Projective: return is_projective(M);
    case ClassId::Flat: return is_flat(M);
    case ClassId::Injective: return is_injective(M);
    case ClassId::PerpOfFamily: return right_perp_member(M, family);
  }
  return false;
}

/// Divisors d of n with 1 < d, in increasing order.
inline std::vector<Int> divisors_above_one(const Int& n) {
  std::vector<Int> out;
  for (Int d = 2; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

/// Cyclic modules R/(d) that are projective and nonzero, R itself last.
inline std::vector<FpModule> projective_cyclics(const Ring& r) {
  std::vector<FpModule> out;
  if (r.is_finite()) {
    for (auto& d : divisors_above_one(r.modulus()))
      if (d != r.modulus() && gcd_int(d, r.modulus() / d) == 1) out.push_back(FpModule::cyclic(r, d));
  }
  out.push_back(FpModule::free(r, 1));
  return out;
}

/// Small cotorsion pair data: the left class, the cogenerating set and the
/// generating monomorphisms (always containing 0 -> R).
struct CotorsionPairSpec {
  Ring ring = Ring::integers();
  std::string name;
  ClassSpec left;
  std::optional<ClassSpec> right;  // defaults to the perp of the cogenerators
  std::vector<FpModule> cogenerators;
  std::vector<ModuleMap> generating_monos;

  bool in_left(const FpModule& M) const { return left.contains(M); }
  bool in_right(const FpModule& M) const { return right ? right->contains(M) : right_perp_member(M, cogenerators); }
  std::string right_name() const { return right ? right->name() : "perp"; }

  /// Checks the stated invariants; throws ValidationError.
  void validate() const {
    bool has_unit = false;
    for (auto& S : cogenerators)
      if (!in_left(S)) throw ValidationError("cogenerator " + describe(S) + " is not in the left class");
    for (auto& k : generating_monos) {
      if (!is_mono(k)) throw ValidationError("generating map is not mono");
      FpModule c = cokernel(k).target();
      bool ok = isomorphic(c, FpModule::free(ring, 1));
      for (auto& S : cogenerators) ok = ok || isomorphic(c, S);
      if (!ok) throw ValidationError("generating mono with cokernel " + describe(c) + " outside the cogenerators");
      if (k.source().gens() == 0 && isomorphic(k.target(), FpModule::free(ring, 1))) has_unit = true;
    }
    if (!has_unit) throw ValidationError("generating monos must contain 0 -> R");
  }
};

namespace detail {

inline std::vector<ModuleMap> zero_monos(const std::vector<FpModule>& targets) {
  std::vector<ModuleMap> out;
  for (auto& S : targets) out.push_back(ModuleMap::zero(FpModule::zero(S.ring()), S));
  return out;
}

/// 0 -> R first, then 0 -> S for the remaining cogenerators.
inline std::vector<ModuleMap> unit_first_monos(const Ring& r, const std::vector<FpModule>& cogens) {
  std::vector<FpModule> t{FpModule::free(r, 1)};
  for (auto& S : cogens)
    if (!isomorphic(S, FpModule::free(r, 1))) t.push_back(S);
  return zero_monos(t);
}

}  // namespace detail

inline CotorsionPairSpec projective_pair(const Ring& r) {
  CotorsionPairSpec p;
  p.ring = r;
  p.name = "projective";
  p.left = {ClassId::Projective, {}, 3};
  p.right = ClassSpec{ClassId::AllObjects, {}, 3};
  p.cogenerators = projective_cyclics(r);
  p.generating_monos = detail::unit_first_monos(r, p.cogenerators);
  return p;
}

/// Finitely presented flat = projective, so the data agree with the projective pair.
inline CotorsionPairSpec flat_pair(const Ring& r) {
  CotorsionPairSpec p = projective_pair(r);
  p.name = "flat";
  p.left = {ClassId::Flat, {}, 3};
  p.right.reset();
  return p;
}

/// (all modules, injectives) over a quasi-Frobenius ring; I contains the ideal inclusions (d) -> R.
inline CotorsionPairSpec injective_pair(const Ring& r) {
  if (!r.is_quasi_frobenius()) throw UnsupportedRing("injective pair needs a quasi-Frobenius ring, got " + r.name());
  CotorsionPairSpec p;
  p.ring = r;
  p.name = "injective";
  p.left = {ClassId::AllObjects, {}, 3};
  p.right = ClassSpec{ClassId::Injective, {}, 3};
  FpModule R = FpModule::free(r, 1);
  p.cogenerators.push_back(R);
  p.generating_monos.push_back(ModuleMap::zero(FpModule::zero(r), R));
  for (auto& d : divisors_above_one(r.modulus())) {
    if (d == r.modulus()) continue;
    p.cogenerators.push_back(FpModule::cyclic(r, d));
    // dR ~ R/(n/d), included by multiplication by d
    p.generating_monos.emplace_back(FpModule::cyclic(r, r.modulus() / d), R,
                                    Matrix::from_rows(r, std::vector<std::vector<Int>>{{d}}));
  }
  return p;
}

/// Deliberately inconsistent fixture: every module on the left, projectives on the right.
inline CotorsionPairSpec wrong_pair(const Ring& r) {
  CotorsionPairSpec p;
  p.ring = r;
  p.name = "wrong";
  p.left = {ClassId::AllObjects, {}, 3};
  p.right = ClassSpec{ClassId::Projective, {}, 3};
  p.cogenerators = {FpModule::free(r, 1)};
  p.generating_monos = detail::unit_first_monos(r, p.cogenerators);
  return p;
}

/// Deterministic pool of small modules: nonfree cyclics in increasing order, R,
/// then sums of two of those, R^2 last.
inline std::vector<FpModule> module_pool(const Ring& r, std::size_t limit = 12) {
  std::vector<FpModule> cyc;
  if (r.is_finite()) {
    for (auto& d : divisors_above_one(r.modulus()))
      if (d != r.modulus()) cyc.push_back(FpModule::cyclic(r, d));
  } else {
    for (int d = 2; d <= 6; ++d) cyc.push_back(FpModule::cyclic(r, d));
  }
  FpModule R = FpModule::free(r, 1);
  std::vector<FpModule> out = cyc;
  out.push_back(R);
  std::vector<FpModule> base = cyc;
  base.push_back(R);
  for (std::size_t a = 0; a < base.size(); ++a)
    for (std::size_t b = a; b < base.size(); ++b) out.push_back(direct_sum(base[a], base[b]));
  if (out.size() > limit) out.resize(limit);
  bool has_r2 = false;
  for (auto& M : out) has_r2 = has_r2 || (M.gens() == 2 && M.relations().cols() == 0);
  if (!has_r2) out.push_back(FpModule::free(r, 2));
  return out;
}

// ---------------------------------------------------------------------------
// Complex classes

enum class ComplexClass { FTilde, DgFLeft, CTilde, DgCRight };

inline std::string complex_class_name(ComplexClass c) {
  switch (c) {
    case ComplexClass::FTilde: return "F~";
    case ComplexClass::DgFLeft: return "dg-F~";
    case ComplexClass::CTilde: return "C~";
    case ComplexClass::DgCRight: return "dg-C~";
  }
  return "?";
}

/// Outcome of a class test, with the list of tests that ran.
struct ClassCertificate {
  bool member = false;
  ComplexClass cls = ComplexClass::FTilde;
  std::vector<std::string> tests;
  std::string witness;
  bool at_scale = false;  // dg-side answers are relative to the finite test family
};

/// Exact complex on a short exact sequence A -i-> B -p-> C placed in degrees n+1, n, n-1.
inline ChainComplex ses_complex(int n, const ModuleMap& i, const ModuleMap& p) {
  return ChainComplex(i.source().ring(), n - 1, {p.target(), p.source(), i.source()}, {p.matrix(), i.matrix()});
}

/// Non-split exact sequences whose end terms satisfy `keep`.
template <class Keep>
std::vector<std::pair<ModuleMap, ModuleMap>> basic_sequences(const Ring& r, Keep keep) {
  std::vector<std::pair<ModuleMap, ModuleMap>> out;
  FpModule R = FpModule::free(r, 1);
  if (r.is_finite()) {
    for (auto& d : divisors_above_one(r.modulus())) {
      if (d == r.modulus()) continue;
      FpModule A = FpModule::cyclic(r, r.modulus() / d), C = FpModule::cyclic(r, d);
      if (!keep(A) || !keep(C)) continue;
      out.emplace_back(ModuleMap(A, R, Matrix::from_rows(r, std::vector<std::vector<Int>>{{d}})),
                       ModuleMap(R, C, Matrix::identity(r, 1)));
    }
  } else {
    for (int d : {2, 3}) {
      FpModule C = FpModule::cyclic(r, d);
      if (!keep(R) || !keep(C)) continue;
      out.emplace_back(ModuleMap(R, R, Matrix::from_rows(r, {{d}})), ModuleMap(R, C, Matrix::identity(r, 1)));
    }
  }
  return out;
}

/// Exact complexes with right-class cycles over degrees [lo, hi], used to test dg-F~.
inline std::vector<ChainComplex> ctilde_test_family(const CotorsionPairSpec& pair, int lo, int hi) {
  const Ring& r = pair.ring;
  std::vector<ChainComplex> out;
  auto seqs = basic_sequences(r, [&](const FpModule& M) { return pair.in_right(M); });
  for (int n = lo; n <= hi; ++n) {
    for (auto& [i, p] : seqs) out.push_back(ses_complex(n, i, p));
    out.push_back(disk(n, FpModule::free(r, 1)));
  }
  return out;
}

/// Exact complexes with left-class cycles over [lo, hi], used to test dg-C~.
inline std::vector<ChainComplex> ftilde_test_family(const CotorsionPairSpec& pair, int lo, int hi) {
  const Ring& r = pair.ring;
  std::vector<ChainComplex> out;
  auto seqs = basic_sequences(r, [&](const FpModule& M) { return pair.in_left(M); });
  for (int n = lo; n <= hi; ++n) {
    for (auto& [i, p] : seqs) out.push_back(ses_complex(n, i, p));
    for (auto& S : pair.cogenerators) out.push_back(disk(n, S));
  }
  return out;
}

inline ClassCertificate complex_class_member(const ChainComplex& X, ComplexClass cls, const CotorsionPairSpec& pair) {
  require_same_ring(X.ring(), pair.ring, "complex_class_member");
  ClassCertificate cert;
  cert.cls = cls;
  cert.member = true;
  bool left_side = cls == ComplexClass::FTilde || cls == ComplexClass::DgFLeft;
  auto in_class = [&](const FpModule& M) { return left_side ? pair.in_left(M) : pair.in_right(M); };
  std::string cname = left_side ? pair.left.name() : pair.right_name();
  auto fail = [&](const std::string& w) {
    cert.member = false;
    cert.witness = w;
    return cert;
  };
  if (cls == ComplexClass::FTilde || cls == ComplexClass::CTilde) {
    cert.tests.push_back("exact");
    for (int n = X.lo(); n <= X.hi(); ++n)
      if (!is_zero(homology(X, n))) return fail("H_" + std::to_string(n) + " = " + describe(homology(X, n)));
    cert.tests.push_back("cycles in " + cname);
    for (int n = X.lo(); n <= X.hi(); ++n) {
      FpModule z = cycle_module(X, n);
      if (!in_class(z)) return fail("Z_" + std::to_string(n) + " = " + describe(z));
    }
    return cert;
  }
  cert.at_scale = true;
  cert.tests.push_back("entries in " + cname);
  for (int n = X.lo(); n <= X.hi(); ++n)
    if (!in_class(X.obj(n))) return fail("X_" + std::to_string(n) + " = " + describe(X.obj(n)));
  if (X.empty()) return cert;
  // the null-homotopy cross-check runs on a minimal presentation
  const ChainComplex Xm = minimal_presentation(X).target();
  if (cls == ComplexClass::DgFLeft) {
    auto fam = ctilde_test_family(pair, X.lo(), X.hi() + 1);
    cert.tests.push_back("null-homotopy into " + std::to_string(fam.size()) + " C~ test complexes");
    for (auto& T : fam)
      if (auto f = non_null_homotopic_map(Xm, T)) return fail("map into " + T.str() + " is not null-homotopic");
  } else {
    auto fam = ftilde_test_family(pair, X.lo() - 1, X.hi());
    cert.tests.push_back("null-homotopy from " + std::to_string(fam.size()) + " F~ test complexes");
    for (auto& T : fam)
      if (auto f = non_null_homotopic_map(T, Xm)) return fail("map from " + T.str() + " is not null-homotopic");
  }
  return cert;
}

inline bool in_complex_class(const ChainComplex& X, ComplexClass cls, const CotorsionPairSpec& pair) {
  return complex_class_member(X, cls, pair).member;
}

/// The induced generating set, in the order: 0 -> D^n(R), S^{n-1}(R) -> D^n(R), S^n(k) for each k.
inline std::vector<ChainMap> induced_generating_monos(const CotorsionPairSpec& pair, int lo, int hi) {
  const Ring& r = pair.ring;
  FpModule R = FpModule::free(r, 1);
  std::vector<ChainMap> out;
  for (int n = lo; n <= hi; ++n) out.push_back(ChainMap::zero(ChainComplex(r), disk(n, R)));
  for (int n = lo; n <= hi; ++n) out.push_back(sphere_disk_sequence(n, R).first);
  for (auto& k : pair.generating_monos)
    for (int n = lo; n <= hi; ++n) out.push_back(ChainMap(sphere(n, k.source()), sphere(n, k.target()), {{n, k.matrix()}}));
  return out;
}

/// The trivial part: 0 -> D^n(R) and D^n(k) for each generating mono.
inline std::vector<ChainMap> induced_trivial_monos(const CotorsionPairSpec& pair, int lo, int hi) {
  const Ring& r = pair.ring;
  std::vector<ChainMap> out;
  for (int n = lo; n <= hi; ++n) out.push_back(ChainMap::zero(ChainComplex(r), disk(n, FpModule::free(r, 1))));
  for (auto& k : pair.generating_monos)
    for (int n = lo; n <= hi; ++n) {
      if (k.source().gens() == 0) continue;
      out.push_back(ChainMap(disk(n, k.source()), disk(n, k.target()), {{n, k.matrix()}, {n - 1, k.matrix()}}));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Compatibility

struct Verdict {
  std::string name;
  bool pass = true;
  std::vector<std::string> counterexamples;
  std::size_t checked = 0;
};

struct CompatibilityReport {
  std::vector<Verdict> verdicts;  // resolving, ext-vanishing, intersection
  bool all_pass() const {
    for (auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

inline CompatibilityReport check_compatibility(const CotorsionPairSpec& pair, std::size_t sample_budget) {
  if (sample_budget == 0) throw PreconditionFailed("check_compatibility: sample budget must be positive");
  const Ring& r = pair.ring;
  auto pool = module_pool(r);
  std::vector<FpModule> left, right;
  for (auto& M : pool) {
    if (pair.in_left(M)) left.push_back(M);
    if (pair.in_right(M)) right.push_back(M);
  }
  CompatibilityReport rep;

  // Resolving: kernels of epis between left objects; coresolving: cokernels of monos between right objects.
  Verdict res{"resolving", true, {}, 0};
  for (auto& A : left)
    for (auto& B : left) {
      if (res.checked >= sample_budget) break;
      for (auto& phi : hom(A, B).generators) {
        if (!is_epi(phi)) continue;
        ++res.checked;
        FpModule k = kernel(phi).source();
        if (!pair.in_left(k)) {
          res.pass = false;
          res.counterexamples.push_back("ker(" + describe(A) + " -> " + describe(B) + ") = " + describe(k));
        }
      }
    }
  for (auto& A : right)
    for (auto& B : right) {
      if (res.checked >= 2 * sample_budget) break;
      for (auto& phi : hom(A, B).generators) {
        if (!is_mono(phi)) continue;
        ++res.checked;
        FpModule c = cokernel(phi).target();
        if (!pair.in_right(c)) {
          res.pass = false;
          res.counterexamples.push_back("coker(" + describe(A) + " -> " + describe(B) + ") = " + describe(c));
        }
      }
    }
  rep.verdicts.push_back(res);

  // Ext-vanishing in degrees 1..3.
  Verdict ext{"ext-vanishing", true, {}, 0};
  for (auto& A : left)
    for (auto& B : right) {
      if (ext.checked >= sample_budget) break;
      ++ext.checked;
      for (std::size_t n = 1; n <= 3; ++n)
        if (!is_zero(ext_n(A, B, n))) {
          ext.pass = false;
          ext.counterexamples.push_back("(" + describe(A) + ", " + describe(B) + ")");
          break;
        }
    }
  rep.verdicts.push_back(ext);

  // Intersection: exact dg-F~ samples are in F~.
  Verdict inter{"intersection", true, {}, 0};
  std::vector<ChainComplex> exact_samples;
  for (auto& M : left) exact_samples.push_back(disk(1, M));
  for (auto& [i, p] : basic_sequences(r, [](const FpModule&) { return true; })) exact_samples.push_back(ses_complex(1, i, p));
  for (auto& X : exact_samples) {
    if (inter.checked >= sample_budget) break;
    ++inter.checked;
    if (in_complex_class(X, ComplexClass::DgFLeft, pair) && !in_complex_class(X, ComplexClass::FTilde, pair)) {
      inter.pass = false;
      inter.counterexamples.push_back(X.str());
    }
  }
  rep.verdicts.push_back(inter);
  return rep;
}

}  // namespace cotor
