#include <gtest/gtest.h>

#include "cotor/model.hpp"

using namespace cotor;

namespace {

const Ring Z = Ring::integers();
const Ring Z4 = Ring::integers_mod(4);

FpModule R1(const Ring& r) { return FpModule::free(r, 1); }
FpModule cyc(const Ring& r, long long d) { return FpModule::cyclic(r, d); }

ModelStructureSpec proj(const Ring& r) { return make_structure(StructureId::Projective, r); }

// Chain maps D^1(R) -> X correspond to elements of X_1: enumerate them.
bool brute_disk_lift(const ChainMap& p, const Matrix& y) {
  const ChainComplex& X = p.source();
  const ChainComplex& Y = p.target();
  for (auto& x : elements(X.obj(1)))
    if (element_is_zero(Y.obj(1), p.matrix(1) * x - y)) return true;
  return false;
}

}  // namespace

TEST(Classify, Examples) {
  auto P = proj(Z);
  ChainComplex T(Z, 0, {R1(Z), R1(Z)}, {Matrix::from_rows(Z, {{2}})});
  MapClass id = classify_map(ChainMap::identity(T), P);
  EXPECT_TRUE(id.weq && id.cof && id.fib && id.triv_cof && id.triv_fib);
  MapClass s = classify_map(ChainMap::zero(ChainComplex(Z), sphere(0, cyc(Z, 2))), P);
  EXPECT_FALSE(s.cof);
  EXPECT_FALSE(s.weq);
  MapClass d = classify_map(ChainMap::zero(ChainComplex(Z), disk(1, R1(Z))), P);
  EXPECT_TRUE(d.triv_cof);
  EXPECT_THROW(make_structure(StructureId::Injective, Z), UnsupportedRing);
  ModelStructureSpec bad = make_structure(StructureId::Injective, Z4);
  bad.ring = Z;
  EXPECT_THROW(classify_map(ChainMap::identity(T), bad), UnsupportedRing);
}

TEST(Replacement, Examples) {
  auto P = proj(Z);
  Replacement q = cofibrant_replacement(sphere(0, cyc(Z, 2)), P);
  EXPECT_EQ(q.object.lo(), 0);
  EXPECT_EQ(q.object.hi(), 1);
  EXPECT_EQ(describe(q.object.obj(0)), "Z");
  EXPECT_EQ(describe(q.object.obj(1)), "Z");
  EXPECT_EQ(describe(homology(q.object, 0)), "Z/2");
  ChainComplex T(Z, 0, {R1(Z), R1(Z)}, {Matrix::from_rows(Z, {{2}})});
  EXPECT_TRUE(cofibrant_replacement(T, P).identity);

  auto I4 = make_structure(StructureId::Injective, Z4);
  EXPECT_THROW(fibrant_replacement(sphere(0, cyc(Z4, 2)), I4), BudgetExceeded);
  EXPECT_TRUE(fibrant_replacement(sphere(0, R1(Z4)), I4).identity);
  // exact, with a non-injective entry: the replacement is bounded
  ChainComplex E = ses_complex(0, ModuleMap(cyc(Z4, 2), R1(Z4), Matrix::from_rows(Z4, {{2}})),
                               ModuleMap(R1(Z4), cyc(Z4, 2), Matrix::identity(Z4, 1)));
  Replacement j = fibrant_replacement(E, I4);
  for (int n = j.object.lo(); n <= j.object.hi(); ++n) EXPECT_TRUE(is_injective(j.object.obj(n)));
  EXPECT_TRUE(is_mono(j.map));
  EXPECT_TRUE(is_quasi_iso(j.map));
}

TEST(Factor, Examples) {
  auto P = proj(Z);
  ChainMap f = ChainMap::zero(ChainComplex(Z), sphere(0, cyc(Z, 2)));
  Factorization a = factor_map(f, FactorMode::CofThenTrivFib, P);
  EXPECT_EQ(describe(a.middle().obj(1)), "Z");
  EXPECT_EQ(describe(a.middle().obj(0)), "Z");
  EXPECT_TRUE(is_quasi_iso(a.p));
  EXPECT_TRUE(a.revalidate(P));
  ASSERT_TRUE(a.cells.has_value());
  EXPECT_TRUE(a.cells->composes_exactly());

  ChainMap g = ChainMap::zero(disk(1, R1(Z)), ChainComplex(Z));
  Factorization b = factor_map(g, FactorMode::TrivCofThenFib, P);
  EXPECT_TRUE(is_iso(b.i));
  EXPECT_TRUE(b.revalidate(P));
}

TEST(Factor, RandomMapsAllStructures) {
  Rng rng(17);
  std::vector<ModelStructureSpec> specs = {proj(Z), make_structure(StructureId::Flat, Z), proj(Z4),
                                           proj(Ring::prime_field(3)), make_structure(StructureId::Injective, Z4)};
  for (auto& S : specs) {
    for (int t = 0; t < 12; ++t) {
      ChainComplex X = random_complex(rng, S.ring, 3, 2), Y = random_complex(rng, S.ring, 3, 2);
      ChainMap f = random_chain_map(rng, X, Y);
      for (FactorMode m : {FactorMode::CofThenTrivFib, FactorMode::TrivCofThenFib}) {
        Factorization fz = factor_map(f, m, S);
        EXPECT_TRUE(fz.composes_exactly());
        EXPECT_TRUE(fz.revalidate(S)) << S.name() << " " << factor_mode_name(m) << " " << X.str() << " -> " << Y.str();
        if (m == FactorMode::CofThenTrivFib) EXPECT_TRUE(is_quasi_iso(fz.p));
        if (fz.cells) {
          EXPECT_TRUE(fz.cells->composes_exactly());
          EXPECT_TRUE(fz.cells->cells_are_pushouts());
        }
      }
    }
  }
}

TEST(Lifting, Examples) {
  auto P = proj(Z);
  ChainComplex T(Z, 0, {R1(Z), R1(Z)}, {Matrix::from_rows(Z, {{2}})});
  ChainComplex D = disk(1, R1(Z));
  ChainMap i = ChainMap::identity(T);
  ChainMap p = ChainMap::zero(D, ChainComplex(Z));
  ChainMap top(T, D, {{1, Matrix::from_rows(Z, {{2}})}, {0, Matrix::from_rows(Z, {{1}})}});
  ChainMap h = solve_lifting({i, p, top, ChainMap::zero(T, ChainComplex(Z))}, P);
  EXPECT_TRUE(maps_equal(h, top));
  ChainMap bot(D, T, {{1, Matrix::from_rows(Z, {{1}})}, {0, Matrix::from_rows(Z, {{2}})}});
  ChainMap k = ChainMap::zero(ChainComplex(Z), D);
  EXPECT_TRUE(maps_equal(solve_lifting({k, ChainMap::identity(T), ChainMap::zero(ChainComplex(Z), T), bot}, P), bot));
  // non-commuting square
  EXPECT_THROW(solve_lifting({i, ChainMap::identity(T), ChainMap::zero(T, T), ChainMap::identity(T)}, P), PreconditionFailed);
  // flags missing: 0 -> S^0(Z/2) is not a cofibration
  ChainComplex S = sphere(0, cyc(Z, 2));
  EXPECT_THROW(solve_lifting({ChainMap::zero(ChainComplex(Z), S), ChainMap::identity(S), ChainMap::zero(ChainComplex(Z), S),
                              ChainMap::identity(S)},
                             P),
               PreconditionFailed);
}

TEST(Lifting, DiskAgainstFibrationsOverZmod4MatchesSearch) {
  auto P = proj(Z4);
  Rng rng(23);
  ChainComplex D = disk(1, R1(Z4));
  ChainMap k = ChainMap::zero(ChainComplex(Z4), D);
  int checked = 0;
  for (int t = 0; t < 80; ++t) {
    ChainComplex X = random_complex(rng, Z4, 3, 2), Y = random_complex(rng, Z4, 3, 2);
    ChainMap p = random_chain_map(rng, X, Y);
    if (!classify_map(p, P).fib) continue;
    for (auto& y : elements(Y.obj(1))) {
      ChainMap bottom(D, Y, {{1, y}, {0, Y.d(1) * y}});
      bool expect = brute_disk_lift(p, y);
      EXPECT_TRUE(expect);
      ChainMap h = solve_lifting({k, p, ChainMap::zero(ChainComplex(Z4), X), bottom}, P);
      EXPECT_TRUE(maps_equal(compose(p, h), bottom));
      ++checked;
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(DerivedTensor, Examples) {
  auto P = proj(Z);
  auto t = derived_tensor(sphere(0, cyc(Z, 4)), sphere(0, cyc(Z, 6)), P);
  EXPECT_EQ(describe(t.at(0)), "Z/2");
  EXPECT_EQ(describe(t.at(1)), "Z/2");
  EXPECT_EQ(t.nonzero().size(), 2u);
  auto f = derived_tensor(sphere(0, FpModule::free(Z, 2)), sphere(1, cyc(Z, 3)), P);
  EXPECT_EQ(describe(f.at(1)), "Z/3 + Z/3");
  ChainComplex E = disk(1, FpModule::free(Z, 2));
  for (auto& Y : {sphere(0, cyc(Z, 2)), ChainComplex(Z, 0, {R1(Z), R1(Z)}, {Matrix::from_rows(Z, {{2}})})})
    EXPECT_TRUE(derived_tensor(E, Y, P).nonzero().empty());
  EXPECT_THROW(derived_tensor(E, E, make_structure(StructureId::Injective, Z4)), PreconditionFailed);
}

TEST(DerivedTensor, SpheresMatchTor) {
  auto P = proj(Z);
  for (long long a = 0; a <= 6; ++a)
    for (long long b = 0; b <= 6; ++b) {
      auto t = derived_tensor(sphere(0, cyc(Z, a)), sphere(0, cyc(Z, b)), P);
      EXPECT_TRUE(isomorphic(t.at(0), tor_n(cyc(Z, a), cyc(Z, b), 0)));
      EXPECT_TRUE(isomorphic(t.at(1), tor_n(cyc(Z, a), cyc(Z, b), 1)));
    }
}

TEST(PushoutProduct, Examples) {
  for (const Ring& r : {Z, Z4}) {
    ChainMap u = ChainMap::zero(ChainComplex(r), sphere(0, R1(r)));
    ChainMap pp = pushout_product(u, u);
    EXPECT_TRUE(pp.source().empty());
    EXPECT_TRUE(is_iso(ChainMap(pp.target(), sphere(0, R1(r)), {{0, Matrix::identity(r, 1)}})));
    ChainComplex T = disk(1, R1(r));
    EXPECT_TRUE(is_iso(pushout_product(ChainMap::identity(T), u)));
  }
  ChainMap u = ChainMap::zero(ChainComplex(Z), sphere(0, R1(Z)));
  ChainMap s = sphere_disk_sequence(0, R1(Z)).first;
  MapClass c = classify_map(pushout_product(u, s), proj(Z));
  EXPECT_TRUE(c.cof);
}

TEST(Axioms, ModelAndMonoidal) {
  auto a = check_model_axioms(proj(Z4), 1, 6);
  for (auto& c : a) EXPECT_TRUE(c.ok()) << c.name << ": " << (c.witnesses.empty() ? "" : c.witnesses[0]);
  auto b = check_model_axioms(make_structure(StructureId::Flat, Z), 7, 6);
  for (auto& c : b) EXPECT_TRUE(c.ok()) << c.name << ": " << (c.witnesses.empty() ? "" : c.witnesses[0]);
  EXPECT_THROW(check_model_axioms(proj(Z), 1, 0), PreconditionFailed);
  for (auto& S : {proj(Ring::integers_mod(6)), make_structure(StructureId::Flat, Z)}) {
    auto m = check_monoidal(S, 3, 4);
    for (auto& c : m) EXPECT_TRUE(c.ok()) << S.name() << " " << c.name << ": " << (c.witnesses.empty() ? "" : c.witnesses[0]);
  }
  auto sab = check_monoidal(sabotaged_structure(Z), 3, 2);
  auto it = std::find_if(sab.begin(), sab.end(), [](const CheckResult& c) { return c.name == "(1) left objects flat"; });
  ASSERT_NE(it, sab.end());
  EXPECT_FALSE(it->ok());
  EXPECT_EQ(it->witnesses.front(), "Z/2");
}

TEST(Axioms, Deterministic) {
  auto a = check_model_axioms(proj(Z), 5, 3);
  auto b = check_model_axioms(proj(Z), 5, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].name, b[k].name);
    EXPECT_EQ(a[k].passed, b[k].passed);
    EXPECT_EQ(a[k].witnesses, b[k].witnesses);
  }
}
