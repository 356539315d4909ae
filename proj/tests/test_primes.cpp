#include <gtest/gtest.h>

#include "oracles.hpp"
#include "socialist/primes.hpp"

using namespace socialist;

TEST(IsPrime, Examples) {
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(997));
  EXPECT_FALSE(is_prime(561));
  EXPECT_TRUE(is_prime(1'000'000'007));
  EXPECT_TRUE(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  EXPECT_FALSE(is_prime(18446744073709551615ULL));
  // strong pseudoprime to every prime base up to 23
  EXPECT_FALSE(is_prime(3825123056546413051ULL));
}

TEST(IsPrime, MatchesTrialDivision) {
  for (u64 n = 0; n < 200'000; ++n) ASSERT_EQ(is_prime(n), oracle::trial_division_is_prime(n)) << n;
}

TEST(Enumerate, SmallRange) {
  EXPECT_EQ(enumerate_primes({2, 12, 4}), (std::vector<u64>{2, 3, 5, 7, 11}));
  EXPECT_TRUE(enumerate_primes({100, 100, 8}).empty());
  EXPECT_EQ(enumerate_primes({2, 3, 2}), (std::vector<u64>{2}));
}

TEST(Enumerate, PiOfMillion) {
  EXPECT_EQ(enumerate_primes({2, 1'000'000, 1 << 15}).size(), 78498u);
}

TEST(Enumerate, MatchesNaiveSieve) {
  EXPECT_EQ(enumerate_primes({2, 100'000, 1 << 12}), oracle::naive_sieve(100'000));
}

TEST(Enumerate, NearOneBillion) {
  std::vector<u64> expect;
  for (u64 n = 1'000'000'000; n < 1'000'000'100; ++n)
    if (is_prime(n)) expect.push_back(n);
  EXPECT_EQ(enumerate_primes({1'000'000'000, 1'000'000'100, 17}), expect);
  EXPECT_FALSE(expect.empty());
}

TEST(Enumerate, SegmentSizeInvisible) {
  const auto ref = enumerate_primes({1000, 50'000, 1 << 16});
  for (u64 seg : {2ULL, 3ULL, 64ULL, 997ULL, 4096ULL}) EXPECT_EQ(enumerate_primes({1000, 50'000, seg}), ref);
}

TEST(Enumerate, RandomWindowsMatchIsPrime) {
  for (u64 lo : {2ULL, 999'983ULL, 123'456'789ULL, 4'000'000'000ULL}) {
    const auto got = enumerate_primes({lo, lo + 3000, 500});
    std::vector<u64> expect;
    for (u64 n = lo; n < lo + 3000; ++n)
      if (is_prime(n)) expect.push_back(n);
    EXPECT_EQ(got, expect) << lo;
  }
}

TEST(PrimeRange, Validation) {
  EXPECT_THROW((PrimeRange{1, 10, 4}.validate()), std::invalid_argument);
  EXPECT_THROW((PrimeRange{10, 5, 4}.validate()), std::invalid_argument);
  EXPECT_THROW((PrimeRange{2, 10, 1}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((PrimeRange{2, 10, 2}.validate()));
}

TEST(SegmentedSieve, SegmentBoundaries) {
  SegmentedSieve s({10, 100, 25});
  EXPECT_EQ(s.segment_count(), 4u);
  EXPECT_EQ(s.segment_begin(0), 10u);
  EXPECT_EQ(s.segment_end(3), 100u);
  EXPECT_EQ(s.segment_end(4), 100u);
}
