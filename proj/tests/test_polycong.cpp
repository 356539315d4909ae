#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "socialist/polycong.hpp"
#include "socialist/primes.hpp"

using namespace socialist;

TEST(Discriminant, Constants) {
  EXPECT_EQ(cubic_discriminant(kSexticCubic), 1957);
  EXPECT_EQ(cubic_discriminant(kTripleCubic), -23);
  EXPECT_EQ(cubic_discriminant({0, 0, 0}), 0);
  EXPECT_EQ(discriminant(MonicPoly{{1, -1}}), 5);
  EXPECT_EQ(1957, 19 * 103);
}

TEST(CubicRoots, Examples) {
  EXPECT_EQ(cubic_roots(kSexticCubic, 13).roots, (std::vector<u64>{5}));
  EXPECT_EQ(cubic_roots({0, 0, -1}, 7).roots, (std::vector<u64>{1, 2, 4}));
}

TEST(CubicRoots, PlusBranchHasZeroOrThreeRoots) {
  for (u64 p : small_primes_below(20'000)) {
    if (p < 5 || p == 19 || p == 103) continue;
    if (jacobi(1957, p) != Symbol::plus) continue;
    const auto n = cubic_roots(kSexticCubic, p).roots.size();
    ASSERT_TRUE(n == 0 || n == 3) << p;
  }
}

TEST(CubicRoots, MinusBranchHasExactlyOneRoot) {
  for (u64 p : small_primes_below(20'000)) {
    if (p < 5 || p == 19 || p == 103) continue;
    if (jacobi(1957, p) == Symbol::minus) {
      ASSERT_EQ(cubic_roots(kSexticCubic, p).roots.size(), 1u) << p;
    }
  }
}

TEST(CubicRoots, MatchesExhaustiveSearch) {
  for (u64 p : small_primes_below(2000)) {
    if (p == 2) continue;
    for (const MonicCubic f : {kSexticCubic, kTripleCubic, MonicCubic{0, 0, -1}, MonicCubic{1, 1, 1},
                               MonicCubic{0, -7, 6}}) {
      ASSERT_EQ(cubic_roots(f, p).roots, oracle::brute_cubic_roots(f.b, f.c, f.d, p))
          << "p=" << p << " f=(" << f.b << "," << f.c << "," << f.d << ")";
    }
  }
}

TEST(CubicRoots, DiscriminantDivisorsHandled) {
  for (u64 p : {19ULL, 103ULL})
    EXPECT_EQ(cubic_roots(kSexticCubic, p).roots, oracle::brute_cubic_roots(10, 24, -1, p));
  // (y-1)^2 (y-2) mod 7: repeated root reported once
  EXPECT_EQ(cubic_roots({-4, 5, -2}, 7).roots, (std::vector<u64>{1, 2}));
}

TEST(CubicRoots, RandomCubicsLargePrimes) {
  std::mt19937_64 rng(99);
  const u64 p = 1'000'003;
  for (int t = 0; t < 200; ++t) {
    // build a cubic from three chosen roots so the answer is known
    std::vector<u64> r{rng() % p, rng() % p, rng() % p};
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    if (r.size() != 3) continue;
    const i64 b = -static_cast<i64>((r[0] + r[1] + r[2]) % p);
    const i64 c = static_cast<i64>((mul_mod(r[0], r[1], p) + mul_mod(r[0], r[2], p) + mul_mod(r[1], r[2], p)) % p);
    const i64 d = -static_cast<i64>(mul_mod(mul_mod(r[0], r[1], p), r[2], p));
    const auto got = polynomial_roots(MonicPoly{{b, c, d}}, p).roots;
    ASSERT_EQ(got, r);
  }
}

TEST(CubicRoots, DeterministicAcrossCalls) {
  for (u64 p : {1'000'003ULL, 999'983ULL, 1'000'000'007ULL}) {
    const auto a = cubic_roots(kSexticCubic, p).roots;
    const auto b = cubic_roots(kSexticCubic, p).roots;
    EXPECT_EQ(a, b);
    for (u64 y : a) {
      const u64 v = (mul_mod(mul_mod(y, y, p), y, p) + mul_mod(10, mul_mod(y, y, p), p) + mul_mod(24, y, p) + p - 1) % p;
      EXPECT_EQ(v, 0u);
    }
  }
}

TEST(FactorParity, Examples) {
  const MonicPoly golden{{1, -1}};
  EXPECT_EQ(factor_parity(golden, 13).nu, 1u);
  EXPECT_EQ(factor_parity(golden, 11).nu, 2u);
  EXPECT_EQ(factor_parity(kSexticCubic, 13).nu, 2u);
  EXPECT_THROW(factor_parity(kSexticCubic, 19), std::domain_error);
  EXPECT_THROW(factor_parity(golden, 5), std::domain_error);
}

TEST(FactorParity, StickelbergerOnRandomPrimes) {
  std::mt19937_64 rng(2024);
  const auto primes = small_primes_below(1'000'000);
  int checked = 0;
  while (checked < 500) {
    const u64 p = primes[rng() % primes.size()];
    if (p < 3 || p == 5 || p == 19 || p == 103) continue;
    for (const MonicPoly& f : {MonicPoly{{1, -1}}, MonicPoly::from(kSexticCubic)}) {
      const FactorParity fp = factor_parity(f, p);
      ASSERT_EQ(to_int(jacobi(fp.discriminant, p)), fp.parity_sign()) << p;
      ASSERT_GE(fp.nu, 1u);
      ASSERT_LE(fp.nu, fp.degree);
    }
    ++checked;
  }
}

TEST(SexticSubstitution, Identity) {
  EXPECT_TRUE(sextic_substitution_check(0, 13));
  for (u64 x = 0; x < 13; ++x) EXPECT_TRUE(sextic_substitution_check(x, 13));
  std::mt19937_64 rng(5);
  const auto primes = small_primes_below(1'000'000);
  for (int t = 0; t < 10'000; ++t) {
    const u64 p = primes[1 + rng() % (primes.size() - 1)];
    ASSERT_TRUE(sextic_substitution_check(rng() % p, p));
  }
}
