#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "cotor/kaplansky.hpp"

using namespace cotor;

namespace {

const Ring Z = Ring::integers();

FpModule R1(const Ring& r) { return FpModule::free(r, 1); }

ClassSpec class_of(ClassId id) {
  ClassSpec c;
  c.id = id;
  return c;
}

// Over Z/n a finite module is projective iff every invariant factor d has gcd(d, n/d) = 1.
bool projective_by_factors(const FpModule& M) {
  long long n = static_cast<long long>(M.ring().modulus());
  for (auto& d : invariant_factors(M)) {
    long long dd = static_cast<long long>(d);
    if (std::gcd(dd, n / dd) != 1) return false;
  }
  return true;
}

// Smallest submodule containing X with S and F/S projective, by listing all subsets
// of F closed under addition.
std::size_t brute_min_witness(const FpModule& F, const Matrix& X) {
  auto els = elements(F);
  const Ring& r = F.ring();
  std::size_t N = els.size(), best = 0;
  auto index_of = [&](const Matrix& v) {
    for (std::size_t i = 0; i < N; ++i)
      if (element_is_zero(F, v - els[i])) return i;
    throw std::logic_error("element not found");
  };
  std::vector<std::vector<std::size_t>> add(N, std::vector<std::size_t>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) add[i][j] = index_of(els[i] + els[j]);
  std::vector<std::size_t> must;
  for (std::size_t j = 0; j < X.cols(); ++j) must.push_back(index_of(X.col_matrix(j)));
  for (unsigned long long mask = 1; mask < (1ULL << N); ++mask) {
    auto in = [&](std::size_t i) { return (mask >> i) & 1ULL; };
    bool ok = true;
    for (auto m : must) ok = ok && in(m);
    for (std::size_t i = 0; ok && i < N; ++i)
      for (std::size_t j = 0; ok && j < N; ++j)
        if (in(i) && in(j) && !in(add[i][j])) ok = false;
    if (!ok) continue;
    std::size_t card = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (card == 1 || (best && card >= best)) continue;
    Matrix S(r, F.gens(), 0);
    for (std::size_t i = 0; i < N; ++i)
      if (in(i)) S = Matrix::hcat(S, els[i]);
    if (!projective_by_factors(present(r, S, F.lattice()))) continue;
    if (!projective_by_factors(quotient(F, S).target())) continue;
    best = card;
  }
  return best;
}

// Rank over Q by fraction-free elimination on small integers.
std::size_t rational_rank(std::vector<std::vector<long long>> a) {
  std::size_t rank = 0, rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = 0; i < rows; ++i)
      if (i != rank && a[i][c]) {
        long long f = a[i][c], g = a[rank][c];
        for (std::size_t k = 0; k < cols; ++k) a[i][k] = a[i][k] * g - a[rank][k] * f;
      }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST(SmallSub, Examples) {
  FpModule F2 = FpModule::free(Z, 2);
  ModuleMap g(F2, FpModule::cyclic(Z, 2), Matrix::from_rows(Z, {{1, 0}}));
  ModuleMap s = find_small_surjecting_sub(g, 1);
  EXPECT_EQ(s.matrix(), Matrix::from_rows(Z, {{1}, {0}}));
  ModuleMap iso(F2, F2, Matrix::identity(Z, 2));
  EXPECT_TRUE(is_iso(find_small_surjecting_sub(iso, 2)));
  EXPECT_THROW(find_small_surjecting_sub(iso, 1), BudgetExceeded);
  EXPECT_THROW(find_small_surjecting_sub(ModuleMap(R1(Z), F2, Matrix::from_rows(Z, {{1}, {0}})), 3), PreconditionFailed);
}

TEST(SmallSub, RestrictionStaysEpi) {
  Ring Z12 = Ring::integers_mod(12);
  for (auto& M : module_pool(Z12, 6))
    for (auto& N : module_pool(Z12, 6))
      for (auto& g : hom(M, N).generators) {
        if (!is_epi(g) || N.gens() > 3) continue;
        ModuleMap s = find_small_surjecting_sub(g, 3);
        EXPECT_TRUE(is_epi(compose(g, s)));
        EXPECT_LE(s.matrix().cols(), N.gens());
      }
}

TEST(Witness, OverIntegers) {
  auto flat = class_of(ClassId::Flat);
  FpModule F3 = FpModule::free(Z, 3);
  auto w = kaplansky_witness(F3, Matrix::from_rows(Z, {{2}, {3}, {0}}), flat);
  EXPECT_TRUE(isomorphic(w.inclusion.source(), R1(Z)));
  EXPECT_TRUE(isomorphic(w.projection.target(), FpModule::free(Z, 2)));
  auto w0 = kaplansky_witness(F3, Matrix(Z, 3, 0), flat);
  EXPECT_FALSE(is_zero(w0.inclusion.source()));
  EXPECT_THROW(kaplansky_witness(FpModule::cyclic(Z, 2), Matrix(Z, 1, 0), flat), NotInClass);
}

TEST(Witness, SaturationMatchesRationalRank) {
  std::mt19937_64 rng(3);
  auto proj = class_of(ClassId::Projective);
  FpModule F = FpModule::free(Z, 3);
  for (int t = 0; t < 60; ++t) {
    std::size_t m = 1 + rng() % 3;
    std::vector<std::vector<long long>> x(3, std::vector<long long>(m));
    for (auto& row : x)
      for (auto& v : row) v = static_cast<long long>(rng() % 7) - 3;
    Matrix X(Z, 3, m);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < m; ++j) X.set(i, j, x[i][j]);
    auto w = kaplansky_witness(F, X, proj);
    std::size_t rk = rational_rank(x);
    FpModule S = w.inclusion.source();
    EXPECT_TRUE(isomorphic(S, FpModule::free(Z, rk == 0 ? 1 : rk)));
    EXPECT_TRUE(isomorphic(w.projection.target(), FpModule::free(Z, 3 - (rk == 0 ? 1 : rk))));
  }
}

TEST(Witness, FiniteRingsMatchBruteForce) {
  Ring Z6 = Ring::integers_mod(6);
  auto flat = class_of(ClassId::Flat);
  auto w = kaplansky_witness(R1(Z6), Matrix::from_rows(Z6, {{3}}), flat);
  EXPECT_EQ(cardinality(w.inclusion.source()), 2);
  for (long long n : {4, 6, 12}) {
    Ring R = Ring::integers_mod(n);
    auto proj = class_of(ClassId::Projective);
    for (auto& F : module_pool(R, 6)) {
      if (!proj.contains(F) || cardinality(F) > 16) continue;
      for (auto& x : elements(F)) {
        auto ww = kaplansky_witness(F, x, proj);
        EXPECT_EQ(static_cast<std::size_t>(cardinality(ww.inclusion.source())), brute_min_witness(F, x))
            << describe(F) << " " << x.str();
      }
    }
  }
}

TEST(Filtration, Examples) {
  FpModule F2 = FpModule::free(Z, 2);
  KaplanskyConfig cfg;
  cfg.gamma = 1;
  auto ch = kaplansky_filtration(ModuleMap(FpModule::zero(Z), F2, Matrix(Z, 2, 0)), class_of(ClassId::Projective), cfg);
  ASSERT_EQ(ch.length(), 2u);
  EXPECT_TRUE(isomorphic(ch.quotients[0], R1(Z)));
  EXPECT_TRUE(isomorphic(ch.quotients[1], R1(Z)));
  Ring Z6 = Ring::integers_mod(6);
  auto c6 = kaplansky_filtration(ModuleMap(FpModule::zero(Z6), R1(Z6), Matrix(Z6, 1, 0)), class_of(ClassId::Flat));
  EXPECT_EQ(c6.length(), 1u);  // the seed 1 already generates
  KaplanskyConfig tight;
  tight.step_budget = 1;
  EXPECT_THROW(kaplansky_filtration(ModuleMap(FpModule::zero(Z), F2, Matrix(Z, 2, 0)), class_of(ClassId::Projective), tight),
               BudgetExceeded);
}

TEST(Filtration, FreeModulesOverIntegers) {
  for (std::size_t k = 1; k <= 5; ++k) {
    FpModule F = FpModule::free(Z, k);
    auto ch = kaplansky_filtration(ModuleMap(FpModule::zero(Z), F, Matrix(Z, k, 0)), class_of(ClassId::Flat));
    EXPECT_EQ(ch.length(), k);
    EXPECT_NO_THROW(ch.validate(1));
  }
}

TEST(Envelope, Examples) {
  auto pair = flat_pair(Z);
  ChainComplex F = disk(1, FpModule::free(Z, 2));
  auto env = flat_subcomplex_envelope(F, {{0, Matrix::from_rows(Z, {{1}, {0}})}}, pair);
  const ChainComplex& S = env.inclusion.source();
  Matrix e1 = Matrix::from_rows(Z, {{1}, {0}});
  for (int n : {0, 1}) {
    EXPECT_EQ(describe(S.obj(n)), "Z");
    // S_n spans exactly Z(1, 0)
    EXPECT_TRUE(express_in(env.inclusion.matrix(n), F.obj(n).lattice(), e1, Z).has_value());
    EXPECT_TRUE(express_in(e1, F.obj(n).lattice(), env.inclusion.matrix(n), Z).has_value());
  }
  EXPECT_TRUE(is_exact(S));
  ChainComplex D0 = disk(0, R1(Z));
  auto all = flat_subcomplex_envelope(D0, {{0, Matrix::identity(Z, 1)}, {-1, Matrix::identity(Z, 1)}}, pair);
  EXPECT_TRUE(is_iso(all.inclusion));
  EXPECT_THROW(flat_subcomplex_envelope(sphere(0, R1(Z)), {}, pair), NotInClass);
}

TEST(Envelope, RandomElementsOfExactFreeComplexes) {
  std::mt19937_64 rng(5);
  auto pair = flat_pair(Z);
  for (int t = 0; t < 25; ++t) {
    ChainComplex F(Z);
    for (int k = 0; k < 3; ++k) F = direct_sum(F, disk(static_cast<int>(rng() % 3), FpModule::free(Z, 1 + rng() % 2)));
    int n = F.lo() + static_cast<int>(rng() % static_cast<unsigned>(F.hi() - F.lo() + 1));
    Matrix x(Z, F.obj(n).gens(), 1);
    for (std::size_t i = 0; i < x.rows(); ++i) x.set(i, 0, static_cast<long long>(rng() % 5) - 2);
    ChainMap gen = generated_subcomplex(F, {{n, x}});
    std::map<int, Matrix> X;
    for (auto& [k, m] : gen.components()) X[k] = m;
    auto env = flat_subcomplex_envelope(F, X, pair);
    const ChainComplex& S = env.inclusion.source();
    EXPECT_TRUE(is_exact(S));
    EXPECT_TRUE(is_mono(env.inclusion));
    for (int k = F.lo(); k <= F.hi(); ++k) {
      EXPECT_TRUE(pair.in_left(cycle_module(S, k)));
      FpModule q = present(Z, cycles(F, k), Matrix::hcat(env.cycles[k].lifted(), F.obj(k).lattice()));
      auto inv = invariant_factors(q);
      for (auto& d : inv) EXPECT_EQ(d, 0);  // torsion-free
    }
  }
}

TEST(ICell, DiskAndSphereCells) {
  auto pair = projective_pair(Z);
  ChainComplex B = direct_sum(disk(1, R1(Z)), disk(0, R1(Z)));
  auto ch = icell_decompose(ChainMap::zero(ChainComplex(Z), B), pair);
  EXPECT_EQ(ch.cells.size(), 2u);
  EXPECT_TRUE(ch.composes_exactly());
  EXPECT_TRUE(ch.cells_are_pushouts());

  ChainComplex T(Z, 0, {R1(Z), R1(Z)}, {Matrix::from_rows(Z, {{2}})});
  auto st = icell_decompose(ChainMap::zero(ChainComplex(Z), T), pair);
  EXPECT_EQ(st.cells.size(), 2u);
  EXPECT_EQ(st.cells[0].kind, CellKind::Sphere);
  EXPECT_TRUE(st.cells_are_pushouts());

  auto [i, p] = sphere_disk_sequence(1, FpModule::free(Z, 2));
  auto one = icell_decompose(i, pair);
  EXPECT_EQ(one.cells.size(), 2u);
  EXPECT_TRUE(one.composes_exactly());
  EXPECT_TRUE(one.cells_are_pushouts());
}

TEST(ICell, NonFreeCokernelHasNoCertificate) {
  Ring Z6 = Ring::integers_mod(6);
  auto pair = projective_pair(Z6);
  EXPECT_THROW(icell_decompose(ChainMap::zero(ChainComplex(Z6), sphere(0, FpModule::cyclic(Z6, 2))), pair),
               CertificateMissing);
  EXPECT_THROW(icell_decompose(ChainMap::zero(ChainComplex(Z), sphere(0, FpModule::cyclic(Z, 2))), projective_pair(Z)),
               CertificateMissing);
}

TEST(ICell, RandomMonosWithFreeCokernel) {
  std::mt19937_64 rng(9);
  auto pair = projective_pair(Z);
  for (int t = 0; t < 20; ++t) {
    ChainComplex A(Z), Cc(Z);
    for (int k = 0; k < 2; ++k) {
      int n = static_cast<int>(rng() % 3) - 1;
      A = direct_sum(A, rng() % 2 ? disk(n, R1(Z)) : ChainComplex(Z, n - 1, {R1(Z), R1(Z)}, {Matrix::from_rows(Z, {{3}})}));
      Cc = direct_sum(Cc, rng() % 2 ? disk(n, R1(Z)) : sphere(n, R1(Z)));
    }
    ChainMap f = inject_left(A, Cc);
    auto ch = icell_decompose(f, pair);
    EXPECT_TRUE(ch.composes_exactly());
    EXPECT_TRUE(ch.cells_are_pushouts());
  }
}
