#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <thread>
#include <vector>

#include "alc/parallel.hpp"
#include "alc/rng.hpp"

// Reference values from an independent big-integer implementation of the
// splitmix64 finalizer; mix(0, 0) is the first splitmix64 output for seed 0.
TEST(Mix, FrozenVectors) {
  EXPECT_EQ(alc::mix(0, 0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(alc::mix(0, 1), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(alc::mix(1, 0), 0xbfef8030ddc2d772ULL);
  EXPECT_EQ(alc::mix(42, 7), 0x272404a0a3926552ULL);
  EXPECT_EQ(alc::mix(~0ULL, ~0ULL), 0x4bffd802ebfb15e4ULL);
  EXPECT_EQ(alc::mix(123456789, 1000000), 0x431938eee5070ed0ULL);
}

TEST(Mix, UsableAtCompileTime) {
  static_assert(alc::mix(0, 0) == 0xe220a8397b1dcdafULL);
  SUCCEED();
}

TEST(CounterRng, StreamIsMixOfCounters) {
  alc::CounterRng rng(99);
  for (std::uint64_t i = 0; i < 10; ++i) EXPECT_EQ(rng.next(), alc::mix(99, i));
  EXPECT_EQ(rng.counter(), 10u);
}

TEST(CounterRng, NormalConsumesTwoCounters) {
  alc::CounterRng rng(5);
  rng.normal();
  EXPECT_EQ(rng.counter(), 2u);
}

TEST(CounterRng, UniformRanges) {
  alc::CounterRng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double v = rng.uniform_open_zero();
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(CounterRng, BelowIsRoughlyUniform) {
  alc::CounterRng rng(11);
  std::vector<int> hist(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) ++hist[rng.below(7)];
  for (int h : hist) EXPECT_NEAR(h, draws / 7, 500);
}

TEST(CounterRng, NormalMoments) {
  alc::CounterRng rng(13);
  const int draws = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < draws; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  EXPECT_NEAR(sum / draws, 0.0, 0.01);
  EXPECT_NEAR(sum2 / draws, 1.0, 0.02);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  alc::parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(ParallelFor, RethrowsLowestIndexFailure) {
  try {
    alc::parallel_for(100, 3, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}
