#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "socialist/filters.hpp"
#include "socialist/verifier.hpp"

using namespace socialist;

TEST(StageMod8, Examples) {
  EXPECT_TRUE(stage_mod8(13));
  EXPECT_FALSE(stage_mod8(17));
  EXPECT_FALSE(stage_mod8(7));
}

TEST(StageLegendre, Examples) {
  EXPECT_EQ(stage_legendre(13), LegendreResult::pass);
  EXPECT_EQ(stage_legendre(173), LegendreResult::pass);
  // (5/37) = -1 passes, (-23/37) = -1 fails
  ASSERT_EQ(oracle::euler_symbol(5, 37), -1);
  ASSERT_EQ(oracle::euler_symbol(-23, 37), -1);
  EXPECT_EQ(stage_legendre(37), LegendreResult::failed_minus23);
  ASSERT_EQ(oracle::euler_symbol(5, 29), 1);
  EXPECT_EQ(stage_legendre(29), LegendreResult::failed_5);
}

TEST(StageCubic, Thirteen) {
  // (1957/13) = -1, sole root y = 5, 4*5+25 = 45 = 6 mod 13, (6/13) = -1
  EXPECT_EQ(oracle::euler_symbol(1957, 13), -1);
  EXPECT_EQ(oracle::euler_symbol(6, 13), -1);
  EXPECT_FALSE(stage_cubic(13).has_value());
}

TEST(StageCubic, PlusBranchPassesUnlessStrict) {
  int strict_rejections = 0;
  for (u64 p : small_primes_below(200'000)) {
    if (p < 7 || p == 19 || p == 103) continue;
    if (jacobi(1957, p) != Symbol::plus) continue;
    ASSERT_FALSE(stage_cubic(p).has_value()) << p;
    if (auto r = stage_cubic(p, true)) {
      ++strict_rejections;
      ASSERT_EQ(six_term_product(r->x, p), 1u);
    }
  }
  EXPECT_GT(strict_rejections, 0);
}

TEST(StageCubic, RejectionWitnessesAreRealCollisions) {
  int seen = 0;
  for (u64 p : small_primes_below(1'000'000)) {
    if (p < 7) continue;
    const FilterOutcome o = run_pipeline(p);
    if (o.verdict != FilterVerdict::rejected_cubic) continue;
    ++seen;
    ASSERT_EQ(oracle::mulm(o.x, o.x + 5, p), o.y);
    ASSERT_EQ(six_term_product(o.x, p), 1u);
    ASSERT_GE(o.x, 1u);
    ASSERT_LE(o.x + 6, p);
    if (p < 20'000) {
      ASSERT_EQ(factorial_mod(o.x + 5, p), factorial_mod(o.x - 1, p)) << p;
    }
  }
  EXPECT_EQ(seen, 4908 - 3662);
}

TEST(Pipeline, Examples) {
  EXPECT_EQ(run_pipeline(13).verdict, FilterVerdict::candidate);
  EXPECT_EQ(run_pipeline(13).stage_reached, 3u);
  EXPECT_EQ(run_pipeline(997).verdict, FilterVerdict::candidate);
  EXPECT_EQ(run_pipeline(29).verdict, FilterVerdict::rejected_legendre5);
  EXPECT_EQ(run_pipeline(37).verdict, FilterVerdict::rejected_legendre23);
  EXPECT_EQ(run_pipeline(17).verdict, FilterVerdict::rejected_mod8);
  EXPECT_EQ(run_pipeline(17).stage_reached, 0u);
}

TEST(Pipeline, NestedSurvivorSets) {
  for (u64 p : small_primes_below(100'000)) {
    if (p < 7) continue;
    const FilterOutcome o = run_pipeline(p);
    const bool s0 = stage_mod8(p);
    const bool s1 = s0 && stage_legendre(p) == LegendreResult::pass;
    const bool s2 = s1 && !stage_cubic(p).has_value();
    ASSERT_EQ(o.stage_reached >= 1, s0);
    ASSERT_EQ(o.stage_reached >= 2, s1);
    ASSERT_EQ(o.stage_reached >= 3, s2);
    ASSERT_EQ(o.is_candidate(), s2);
  }
}

TEST(Counts, SurvivorsBelowThousand) {
  const FilterCounts c = count_filters(7, 1000);
  EXPECT_EQ(c.stage1_list, (std::vector<u64>{13, 173, 197, 277, 317, 397, 653, 853, 877, 997}));
}

TEST(Counts, BelowMillion) {
  const FilterCounts c = count_filters(7, 1'000'000);
  EXPECT_EQ(c.examined, 78498u - 3u);
  EXPECT_EQ(c.stage1_survivors, 4908u);
  EXPECT_EQ(c.stage2_survivors, 3662u);
}

TEST(Counts, StrictModeIsSubset) {
  const FilterCounts loose = count_filters(7, 200'000);
  const FilterCounts strict = count_filters(7, 200'000, true);
  EXPECT_EQ(loose.stage1_survivors, strict.stage1_survivors);
  EXPECT_LT(strict.stage2_survivors, loose.stage2_survivors);
  EXPECT_TRUE(std::includes(loose.stage2_list.begin(), loose.stage2_list.end(),
                            strict.stage2_list.begin(), strict.stage2_list.end()));
}

TEST(Pipeline, RejectionsAreGenuineDisproofs) {
  std::mt19937_64 rng(31337);
  const auto primes = small_primes_below(100'000);
  int checked = 0;
  while (checked < 100) {
    const u64 p = primes[rng() % primes.size()];
    if (p < 7) continue;
    if (run_pipeline(p).is_candidate()) continue;
    const Verdict v = verify_distinct(p, ScanStrategy::naive_bitset());
    ASSERT_NE(v.kind, VerdictKind::socialist) << p;
    ++checked;
  }
}
