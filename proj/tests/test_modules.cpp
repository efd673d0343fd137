#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "cotor/homological.hpp"

using namespace cotor;

namespace {

const Ring Z = Ring::integers();

FpModule cyc(const Ring& r, long long d) { return FpModule::cyclic(r, d); }

long long g(long long a, long long b) { return std::gcd(a, b); }

// Hom(Z/a, Z/b) over Z/n counted by brute force: images x of 1 with a x = 0 in Z/b.
long long hom_count_cyclic(long long a, long long b) {
  long long c = 0;
  for (long long x = 0; x < b; ++x)
    if ((a * x) % b == 0) ++c;
  return c;
}

// Over Z/n with a | n the resolution of Z/a is periodic (a, n/a, a, ...), so
// Ext^1(Z/a, N) = {x : (n/a) x = 0} / a N, counted on elements of N = Z/b, b | n.
long long ext1_count_mod(long long n, long long a, long long b) {
  std::vector<bool> in_image(b, false);
  for (long long y = 0; y < b; ++y) in_image[(a * y) % b] = true;
  long long killed = 0, image = 0;
  for (long long x = 0; x < b; ++x) {
    if (((n / a) * x) % b == 0) ++killed;
    if (in_image[x]) ++image;
  }
  return killed / image;
}

}  // namespace

TEST(MapFactorization, Examples) {
  FpModule Zm = FpModule::free(Z, 1);
  auto two = map_factorization(ModuleMap(Zm, Zm, Matrix::from_rows(Z, {{2}})));
  EXPECT_TRUE(is_zero(two.kernel.source()));
  EXPECT_EQ(describe(two.image), "Z");
  EXPECT_EQ(describe(two.cokernel.target()), "Z/2");

  FpModule A = direct_sum(cyc(Z, 2), Zm), B = cyc(Z, 3);
  auto zero = map_factorization(ModuleMap::zero(A, B));
  EXPECT_TRUE(is_iso(zero.kernel));
  EXPECT_TRUE(is_iso(zero.cokernel));

  auto red = map_factorization(ModuleMap(Zm, cyc(Z, 4), Matrix::from_rows(Z, {{1}})));
  EXPECT_EQ(describe(red.kernel.source()), "Z");
  EXPECT_TRUE(is_zero(red.cokernel.target()));
}

TEST(FreeResolution, Examples) {
  auto r = free_resolution(cyc(Z, 2), 4);
  ASSERT_EQ(r.ranks.size(), 2u);
  EXPECT_EQ(r.d(1), Matrix::from_rows(Z, {{2}}));

  auto f = free_resolution(FpModule::free(Z, 3), 4);
  EXPECT_EQ(f.ranks, std::vector<std::size_t>{3});

  Ring Z4 = Ring::integers_mod(4);
  auto p = free_resolution(cyc(Z4, 2), 5);
  ASSERT_EQ(p.ranks.size(), 6u);
  for (std::size_t i = 1; i <= 5; ++i) {
    ASSERT_EQ(p.d(i).rows(), 1u);
    ASSERT_EQ(p.d(i).cols(), 1u);
    EXPECT_EQ(p.d(i)(0, 0), 2);
  }
}

TEST(FreeResolution, IsExact) {
  for (long long n : {4, 6, 8, 12}) {
    Ring R = Ring::integers_mod(n);
    for (long long a = 1; a <= n; ++a) {
      if (n % a) continue;
      auto res = free_resolution(direct_sum(cyc(R, a), cyc(R, n / a)), 4);
      auto maps = res.maps();
      for (std::size_t i = 1; i < maps.size(); ++i) {
        ASSERT_TRUE(is_zero_map(compose(maps[i - 1], maps[i])));
        if (i + 1 < maps.size()) ASSERT_TRUE(is_zero(homology_at(maps[i + 1], maps[i])));
      }
      EXPECT_TRUE(is_epi(maps[0]));
    }
  }
}

TEST(Ext, Examples) {
  EXPECT_EQ(describe(ext_n(cyc(Z, 2), FpModule::free(Z, 1), 1)), "Z/2");
  Ring Z6 = Ring::integers_mod(6);
  EXPECT_TRUE(is_zero(ext_n(cyc(Z6, 2), cyc(Z6, 3), 1)));
  FpModule M = direct_sum(cyc(Z, 4), FpModule::free(Z, 1));
  FpModule N = direct_sum(cyc(Z, 6), cyc(Z, 9));
  EXPECT_TRUE(isomorphic(ext_n(M, N, 0), hom(M, N).module));
  EXPECT_TRUE(is_zero(ext_n(FpModule::free(Z, 2), N, 1)));
  EXPECT_TRUE(is_zero(ext_n(FpModule::free(Z6, 2), cyc(Z6, 2), 2)));
}

TEST(Ext, CyclicsOverIntegersAgreeWithGcd) {
  for (long long a = 1; a <= 9; ++a)
    for (long long b = 0; b <= 9; ++b) {
      // Ext^1_Z(Z/a, Z/b) = Z/gcd(a, b), Hom = Z/gcd(a, b) (b = 0: Hom = 0, Ext^1 = Z/a).
      FpModule e1 = ext_n(cyc(Z, a), cyc(Z, b), 1);
      FpModule e0 = ext_n(cyc(Z, a), cyc(Z, b), 0);
      EXPECT_EQ(cardinality(e1), b == 0 ? a : g(a, b)) << a << " " << b;
      EXPECT_EQ(cardinality(e0), b == 0 ? 1 : g(a, b)) << a << " " << b;
      EXPECT_TRUE(is_zero(ext_n(cyc(Z, a), cyc(Z, b), 2)));
    }
}

TEST(Ext, CyclicsOverFiniteRingsAgreeWithBruteForce) {
  for (long long n : {4, 6, 8, 9, 12}) {
    Ring R = Ring::integers_mod(n);
    for (long long a = 1; a <= n; ++a)
      for (long long b = 1; b <= n; ++b) {
        if (n % a || n % b) continue;
        EXPECT_EQ(cardinality(ext_n(cyc(R, a), cyc(R, b), 0)), hom_count_cyclic(a, b));
        EXPECT_EQ(cardinality(ext_n(cyc(R, a), cyc(R, b), 1)), a == n ? 1 : ext1_count_mod(n, a, b))
            << n << " " << a << " " << b;
      }
  }
}

TEST(Tor, Examples) {
  EXPECT_EQ(describe(tor_n(cyc(Z, 4), cyc(Z, 6), 1)), "Z/2");
  FpModule M = direct_sum(cyc(Z, 4), FpModule::free(Z, 1));
  FpModule N = cyc(Z, 10);
  EXPECT_TRUE(isomorphic(tor_n(M, N, 0), tensor_modules(M, N)));
  EXPECT_TRUE(is_zero(tor_n(FpModule::free(Z, 2), N, 1)));
  Ring Z8 = Ring::integers_mod(8);
  EXPECT_EQ(describe(tor_n(cyc(Z8, 2), cyc(Z8, 4), 3)), "Z/2");
}

TEST(Tor, SymmetricOnCyclics) {
  for (long long n : {0, 4, 6, 12}) {
    Ring R = n ? Ring::integers_mod(n) : Z;
    long long top = n ? n : 8;
    for (long long a = 1; a <= top; ++a)
      for (long long b = 1; b <= top; ++b) {
        if (n && (n % a || n % b)) continue;
        for (std::size_t k : {0u, 1u, 2u})
          EXPECT_TRUE(isomorphic(tor_n(cyc(R, a), cyc(R, b), k), tor_n(cyc(R, b), cyc(R, a), k)));
      }
  }
}

TEST(Tensor, Examples) {
  EXPECT_EQ(describe(tensor_modules(cyc(Z, 4), cyc(Z, 6))), "Z/2");
  FpModule M = direct_sum(cyc(Z, 4), direct_sum(cyc(Z, 3), FpModule::free(Z, 1)));
  EXPECT_TRUE(isomorphic(tensor_modules(M, FpModule::free(Z, 1)), M));
  EXPECT_TRUE(is_zero(tensor_modules(M, FpModule::zero(Z))));
  for (long long a = 0; a <= 12; ++a)
    for (long long b = 0; b <= 12; ++b) {
      Int c = cardinality(tensor_modules(cyc(Z, a), cyc(Z, b)));
      EXPECT_EQ(c, Int(g(a, b))) << a << " " << b;
    }
}

TEST(Tensor, MapsAreFunctorial) {
  FpModule A = cyc(Z, 6), B = cyc(Z, 12), C = FpModule::free(Z, 1);
  ModuleMap f(A, B, Matrix::from_rows(Z, {{2}}));
  ModuleMap h(C, C, Matrix::from_rows(Z, {{3}}));
  ModuleMap fh = tensor_maps(f, h);
  EXPECT_EQ(fh.matrix(), Matrix::from_rows(Z, {{6}}));
  EXPECT_TRUE(maps_equal(tensor_maps(compose(ModuleMap::identity(B), f), h), fh));
}

TEST(ClassPredicates, Examples) {
  EXPECT_TRUE(is_projective(FpModule::free(Z, 2)));
  EXPECT_FALSE(is_projective(cyc(Z, 2)));
  Ring Z6 = Ring::integers_mod(6), Z4 = Ring::integers_mod(4);
  EXPECT_TRUE(is_projective(cyc(Z6, 2)));
  EXPECT_TRUE(is_flat(FpModule::free(Z, 1)));
  EXPECT_FALSE(is_flat(cyc(Z, 2)));
  EXPECT_TRUE(is_flat(cyc(Z6, 3)));
  EXPECT_TRUE(is_injective(cyc(Z4, 0)));
  EXPECT_FALSE(is_injective(cyc(Z4, 2)));
  EXPECT_THROW(is_injective(cyc(Z, 2)), UnsupportedRing);
}

TEST(ClassPredicates, ProjectiveAgreesWithSplitCover) {
  std::mt19937_64 rng(17);
  for (long long n : {0, 4, 6, 12}) {
    Ring R = n ? Ring::integers_mod(n) : Ring::integers();
    for (int t = 0; t < 40; ++t) {
      std::size_t g = 1 + rng() % 3, k = rng() % 3;
      Matrix rel(R, g, k);
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < k; ++j) rel.set(i, j, Int(static_cast<long long>(rng() % 7) - 3));
      FpModule M(R, g, rel);
      EXPECT_EQ(is_projective(M), detail::cover_splits(M)) << describe(M);
    }
  }
}

TEST(ClassPredicates, ProjectiveCyclicsOverZmodN) {
  // Z/d is projective over Z/n exactly when gcd(d, n/d) = 1.
  for (long long n : {4, 6, 8, 9, 10, 12, 30}) {
    Ring R = Ring::integers_mod(n);
    for (long long d = 1; d <= n; ++d) {
      if (n % d) continue;
      EXPECT_EQ(is_projective(cyc(R, d)), g(d, n / d) == 1) << n << " " << d;
      EXPECT_EQ(is_flat(cyc(R, d)), g(d, n / d) == 1);
    }
  }
}

TEST(ShortExactSeq, ValidatesExactness) {
  Ring Z4 = Ring::integers_mod(4);
  FpModule A = cyc(Z4, 2), B = cyc(Z4, 4), C = cyc(Z4, 2);
  ModuleMap i(A, B, Matrix::from_rows(Z4, {{2}}));
  ModuleMap p(B, C, Matrix::from_rows(Z4, {{1}}));
  EXPECT_NO_THROW(ShortExactSeq(i, p));
  EXPECT_THROW(ShortExactSeq(ModuleMap::zero(A, B), p), ValidationError);
  EXPECT_THROW(ShortExactSeq(i, ModuleMap::zero(B, C)), ValidationError);
  // Z/2 -> Z/4 -> Z/4 by 1: p is an iso, p i != 0.
  EXPECT_THROW(ShortExactSeq(i, ModuleMap::identity(B)), ValidationError);
}

TEST(LiftThrough, ZmodSixExample) {
  Ring Z6 = Ring::integers_mod(6);
  FpModule A = cyc(Z6, 3), B = cyc(Z6, 6), C = cyc(Z6, 2);
  ModuleMap i(A, B, Matrix::from_rows(Z6, {{2}}));
  ModuleMap p(B, C, Matrix::from_rows(Z6, {{1}}));
  ShortExactSeq top(i, p), bottom(i, p);
  ModuleMap f(A, B, Matrix::from_rows(Z6, {{2}}));
  ModuleMap gm(B, C, Matrix::from_rows(Z6, {{1}}));
  ModuleMap h = lift_through(f, gm, top, bottom);
  EXPECT_TRUE(maps_equal(h, ModuleMap::identity(B)));
  // Oracle: the identity is the only endomorphism of Z/6 solving both equations.
  int solutions = 0;
  for (long long x = 0; x < 6; ++x)
    if ((2 * x) % 6 == 2 && x % 2 == 1) ++solutions;
  EXPECT_EQ(solutions, 1);
}

TEST(LiftThrough, IsoBottomRowAndFreeCokernel) {
  FpModule Zm = FpModule::free(Z, 1), Z2 = FpModule::free(Z, 2), O = FpModule::zero(Z);
  // K = 0: q iso, h = q^-1 g.
  ShortExactSeq top(ModuleMap(Zm, Z2, Matrix::from_rows(Z, {{1}, {0}})), ModuleMap(Z2, Zm, Matrix::from_rows(Z, {{0, 1}})));
  FpModule L = cyc(Z, 12);
  ShortExactSeq bot(ModuleMap::zero(O, L), ModuleMap(L, L, Matrix::from_rows(Z, {{5}})));
  ModuleMap f(Zm, L, Matrix::from_rows(Z, {{5}}));
  ModuleMap gm(Z2, L, Matrix::from_rows(Z, {{1, 7}}));
  ModuleMap h = lift_through(f, gm, top, bot);
  EXPECT_TRUE(maps_equal(h, ModuleMap(Z2, L, Matrix::from_rows(Z, {{5, 35}}))));

  // C free: Z -> Z^2 -> Z over 2Z -> Z -> Z/2
  ShortExactSeq bot2(ModuleMap(Zm, Zm, Matrix::from_rows(Z, {{2}})), ModuleMap(Zm, cyc(Z, 2), Matrix::from_rows(Z, {{1}})));
  ModuleMap f2(Zm, Zm, Matrix::from_rows(Z, {{3}}));
  ModuleMap g2(Z2, cyc(Z, 2), Matrix::from_rows(Z, {{1, 1}}));
  ModuleMap h2 = lift_through(f2, g2, top, bot2);
  EXPECT_TRUE(maps_equal(compose(h2, top.mono()), f2));
  EXPECT_TRUE(maps_equal(compose(bot2.epi(), h2), g2));
}

TEST(LiftThrough, Preconditions) {
  Ring Z4 = Ring::integers_mod(4);
  FpModule A = cyc(Z4, 2), B = cyc(Z4, 4);
  ShortExactSeq row(ModuleMap(A, B, Matrix::from_rows(Z4, {{2}})), ModuleMap(B, A, Matrix::from_rows(Z4, {{1}})));
  // Ext^1(Z/2, Z/2) != 0 over Z/4.
  EXPECT_THROW(lift_through(ModuleMap::identity(A), ModuleMap::identity(A), row, row), PreconditionFailed);
  FpModule Zm = FpModule::free(Z, 1), Z2 = FpModule::free(Z, 2), L = cyc(Z, 12);
  ShortExactSeq top(ModuleMap(Zm, Z2, Matrix::from_rows(Z, {{1}, {0}})), ModuleMap(Z2, Zm, Matrix::from_rows(Z, {{0, 1}})));
  ShortExactSeq bot(ModuleMap::zero(FpModule::zero(Z), L), ModuleMap(L, L, Matrix::from_rows(Z, {{5}})));
  // q f = 5 but g i = 1
  EXPECT_THROW(lift_through(ModuleMap(Zm, L, Matrix::from_rows(Z, {{1}})), ModuleMap(Z2, L, Matrix::from_rows(Z, {{1, 7}})), top, bot),
               PreconditionFailed);
}

TEST(LiftThrough, RandomSquaresOverZmodSix) {
  // Exhaustive over the maps Z/6 -> Z/6 in a split situation: every commuting square lifts.
  Ring Z6 = Ring::integers_mod(6);
  FpModule A = cyc(Z6, 3), B = cyc(Z6, 6), C = cyc(Z6, 2);
  ShortExactSeq row(ModuleMap(A, B, Matrix::from_rows(Z6, {{2}})), ModuleMap(B, C, Matrix::from_rows(Z6, {{1}})));
  for (long long a = 0; a < 3; ++a)
    for (long long b = 0; b < 2; ++b) {
      ModuleMap f(A, B, Matrix::from_rows(Z6, {{2 * a}}));
      ModuleMap gm(B, C, Matrix::from_rows(Z6, {{b}}));
      ModuleMap h = lift_through(f, gm, row, row);
      EXPECT_TRUE(maps_equal(compose(h, row.mono()), f));
      EXPECT_TRUE(maps_equal(compose(row.epi(), h), gm));
    }
}
