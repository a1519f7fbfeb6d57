#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rgs/errors.hpp"
#include "rgs/sampling.hpp"

namespace rgs {
namespace {

using sampling::DiscreteDistribution;
using sampling::RngStream;

// Reference vectors for Philox4x32-10 published with Random123.
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(RngStream::philox({0, 0, 0, 0}, {0, 0}),
            (A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(RngStream::philox({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu}),
            (A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(RngStream::philox({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u}),
            (A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, SequenceIsPinned) {
  // The first block of (seed 0, stream 0) is the all-zero Philox block.
  RngStream rng(0, 0);
  EXPECT_EQ(rng.next_u32(), 0x6627e8d5u);
  EXPECT_EQ(rng.next_u32(), 0xe169c58du);
  EXPECT_EQ(rng.next_u64(), (std::uint64_t{0xbc57ac4cu} << 32) | 0x9b00dbd8u);
}

TEST(RngStream, UniformInHalfOpenUnitInterval) {
  RngStream rng(3, 9);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(RngStream, GaussianMoments) {
  RngStream rng(5, 1);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    s += g;
    s2 += g * g;
  }
  EXPECT_NEAR(s / n, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(DeriveStream, Deterministic) {
  auto a = sampling::derive_stream(7, 0);
  auto b = sampling::derive_stream(7, 0);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(DeriveStream, DistinctTrialsAndSeedsDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t t = 0; t < 10000; ++t) first.insert(sampling::derive_stream(7, t).next_u64());
  EXPECT_EQ(first.size(), 10000u);

  int same = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    same += sampling::derive_stream(8, t).next_u64() == sampling::derive_stream(7, t).next_u64();
  }
  EXPECT_EQ(same, 0);
}

TEST(Distribution, Probabilities) {
  const auto d = sampling::build_distribution(std::vector<double>{4, 1});
  EXPECT_DOUBLE_EQ(d.probability(0), 0.8);
  EXPECT_DOUBLE_EQ(d.probability(1), 0.2);
  EXPECT_DOUBLE_EQ(d.total(), 5.0);
}

TEST(Distribution, InverseCdfExamples) {
  const auto d = sampling::build_distribution(std::vector<double>{4, 1});
  EXPECT_EQ(d.index_for(0.9), 1u);
  EXPECT_EQ(d.index_for(0.0), 0u);
  EXPECT_EQ(d.index_for(0.8), 1u);  // boundary goes right: cumulative must exceed u * total
  EXPECT_EQ(d.index_for(0.7999999), 0u);
}

TEST(Distribution, ZeroWeightNeverReturned) {
  const auto d = sampling::build_distribution(std::vector<double>{1, 0, 3});
  EXPECT_EQ(d.probability(1), 0.0);
  EXPECT_EQ(d.support(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(d.index_for(0.25), 2u);  // exactly the cumulative edge of index 0
  RngStream rng(1, 2);
  for (int i = 0; i < 100000; ++i) ASSERT_NE(d.sample(rng), 1u);
  // trailing zero weights must not be reachable either
  const auto e = sampling::build_distribution(std::vector<double>{2, 0, 0});
  for (double u : {0.0, 0.5, 0.999999999999}) EXPECT_EQ(e.index_for(u), 0u);
}

TEST(Distribution, SingleSupport) {
  const auto d = sampling::build_distribution(std::vector<double>{0, 0, 2.5, 0});
  RngStream rng(4, 4);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(d.sample(rng), 2u);
}

TEST(Distribution, RejectsInvalidWeights) {
  EXPECT_THROW(sampling::build_distribution(std::vector<double>{0, 0}), ContractViolation);
  EXPECT_THROW(sampling::build_distribution(std::vector<double>{}), ContractViolation);
  EXPECT_THROW(sampling::build_distribution(std::vector<double>{1, -1}), ContractViolation);
}

TEST(Distribution, CumulativeEndsAtTotal) {
  std::vector<double> w;
  for (int i = 0; i < 1000; ++i) w.push_back(1.0 / (1 + i));
  const auto d = sampling::build_distribution(w);
  double sum = 0.0;
  for (double v : w) sum += v;
  EXPECT_NEAR(d.cumulative().back(), sum, 1e-12 * sum);
}

TEST(Distribution, MillionDrawsMatchProbabilities) {
  const auto d = sampling::build_distribution(std::vector<double>{4, 1});
  RngStream rng(99, 3);
  const int n = 1000000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += d.sample(rng) == 1;
  const double p = 0.2;
  const double se = std::sqrt(p * (1 - p) / n);
  EXPECT_LE(std::abs(static_cast<double>(ones) / n - p), 4 * se);

  // chi-square with 1 degree of freedom, 0.001 critical value
  const double e0 = n * 0.8, e1 = n * 0.2;
  const double o0 = n - ones, o1 = ones;
  const double chi2 = (o0 - e0) * (o0 - e0) / e0 + (o1 - e1) * (o1 - e1) / e1;
  EXPECT_LT(chi2, 10.828);
}

TEST(Distribution, ManyIndicesWithinFourStandardErrors) {
  const std::vector<double> w{1, 0, 2, 3, 0, 4};
  const auto d = sampling::build_distribution(w);
  RngStream rng(123, 0);
  const int n = 1000000;
  std::vector<int> counts(w.size(), 0);
  for (int i = 0; i < n; ++i) ++counts[d.sample(rng)];
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double p = d.probability(j);
    if (p == 0.0) {
      EXPECT_EQ(counts[j], 0);
      continue;
    }
    EXPECT_LE(std::abs(static_cast<double>(counts[j]) / n - p), 4 * std::sqrt(p * (1 - p) / n));
  }
}

}  // namespace
}  // namespace rgs
