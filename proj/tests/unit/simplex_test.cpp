#include "belllab/simplex.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace belllab {
namespace {

using testing::brute_force_lattice;

std::vector<std::vector<std::uint32_t>> collect(std::uint32_t lambda_count, std::uint32_t l) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& d : enumerate_configurations(lambda_count, l))
    out.emplace_back(d.numerators().begin(), d.numerators().end());
  return out;
}

TEST(LatticeDistribution, RejectsBadNormalization) {
  EXPECT_THROW(LatticeDistribution({1, 1}, 3), std::invalid_argument);
  EXPECT_THROW(LatticeDistribution({}, 1), std::invalid_argument);
  EXPECT_THROW(LatticeDistribution({0}, 0), std::invalid_argument);
  EXPECT_NO_THROW(LatticeDistribution({1, 2}, 3));
}

TEST(LatticeDistribution, ProbabilityIsExact) {
  const LatticeDistribution d({1, 2, 3}, 6);
  EXPECT_EQ(d.probability(0), Rational(1, 6));
  EXPECT_EQ(d.probability(1), Rational(1, 3));
  EXPECT_EQ(d.probability(2), Rational(1, 2));
}

TEST(CountConfigurations, KnownValues) {
  EXPECT_EQ(count_configurations(3, 2), 6);
  EXPECT_EQ(count_configurations(1, 5), 1);
  EXPECT_EQ(count_configurations(2, 2), 3);
}

TEST(CountConfigurations, RejectsDegenerateArguments) {
  EXPECT_THROW(count_configurations(0, 2), std::invalid_argument);
  EXPECT_THROW(count_configurations(3, 0), std::invalid_argument);
}

TEST(CountConfigurations, MatchesBruteForce) {
  for (std::uint32_t lambda_count = 1; lambda_count <= 6; ++lambda_count)
    for (std::uint32_t l = 1; l <= 8; ++l)
      EXPECT_EQ(count_configurations(lambda_count, l),
                brute_force_lattice(lambda_count, l).size())
          << "Lambda=" << lambda_count << " L=" << l;
}

TEST(CountConfigurations, PascalRecurrence) {
  for (std::uint32_t lambda_count = 2; lambda_count <= 30; ++lambda_count)
    for (std::uint32_t l = 2; l <= 30; ++l)
      EXPECT_EQ(count_configurations(lambda_count, l),
                count_configurations(lambda_count - 1, l) + count_configurations(lambda_count, l - 1));
}

TEST(CountConfigurations, LargeValuesStayExact) {
  // C(1099, 99) has 148 digits; the u64 variant must refuse it.
  const BigInt v = count_configurations(100, 1000);
  EXPECT_EQ(decimal_digits(v), v.get_str().size());
  EXPECT_FALSE(count_configurations_u64(100, 1000).has_value());
  EXPECT_EQ(count_configurations_u64(3, 2), 6u);
}

TEST(Enumerate, KnownValues) {
  using V = std::vector<std::vector<std::uint32_t>>;
  EXPECT_EQ(collect(2, 1), (V{{1, 0}, {0, 1}}));
  EXPECT_EQ(collect(1, 3), (V{{3}}));
  EXPECT_EQ(collect(3, 1), (V{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(Enumerate, ReverseLexOrderMatchesSortedBruteForce) {
  for (std::uint32_t lambda_count = 1; lambda_count <= 5; ++lambda_count)
    for (std::uint32_t l = 1; l <= 6; ++l)
      EXPECT_EQ(collect(lambda_count, l), brute_force_lattice(lambda_count, l));
}

TEST(Rank, KnownValues) {
  EXPECT_EQ(rank(LatticeDistribution({2, 0}, 2)), 0);
  EXPECT_EQ(rank(LatticeDistribution({0, 2}, 2)), 2);
  EXPECT_EQ(unrank(2, 2, 1), LatticeDistribution({1, 1}, 2));
  EXPECT_EQ(rank(*enumerate_configurations(4, 3).begin()), 0);
}

TEST(Rank, RejectsOutOfRange) {
  EXPECT_THROW(unrank(2, 2, 3), std::out_of_range);
  EXPECT_THROW(unrank(2, 2, -1), std::out_of_range);
}

TEST(Rank, BijectionOnEveryPoint) {
  for (std::uint32_t lambda_count = 1; lambda_count <= 5; ++lambda_count)
    for (std::uint32_t l = 1; l <= 7; ++l) {
      BigInt expected = 0;
      for (const auto& d : enumerate_configurations(lambda_count, l)) {
        ASSERT_EQ(rank(d), expected);
        ASSERT_EQ(unrank(lambda_count, l, expected), d);
        ++expected;
      }
      EXPECT_EQ(expected, count_configurations(lambda_count, l));
    }
}

TEST(Rank, RoundTripOnLargeLattice) {
  std::mt19937_64 rng(7);
  const BigInt total = count_configurations(40, 200);
  gmp_randclass gen(gmp_randinit_default);
  gen.seed(11);
  for (int trial = 0; trial < 200; ++trial) {
    const BigInt r = gen.get_z_range(total);
    EXPECT_EQ(rank(unrank(40, 200, r)), r);
    const auto d = testing::random_lattice(rng, 40, 200);
    EXPECT_EQ(unrank(40, 200, rank(d)), d);
  }
}

TEST(Range, WindowsPartitionTheEnumeration) {
  const std::uint32_t lambda_count = 4, l = 6;
  const auto all = collect(lambda_count, l);
  std::vector<std::vector<std::uint32_t>> stitched;
  for (std::uint64_t first = 0; first < all.size(); first += 13)
    for (const auto& d : ConfigurationRange(lambda_count, l, BigInt(static_cast<unsigned long>(first)), 13))
      stitched.emplace_back(d.numerators().begin(), d.numerators().end());
  EXPECT_EQ(stitched, all);
}

TEST(Range, EmptyWindows) {
  EXPECT_EQ(ConfigurationRange(3, 2, 0, 0).begin(), std::default_sentinel);
  EXPECT_EQ(ConfigurationRange(3, 2, 6, 5).begin(), std::default_sentinel);
}

}  // namespace
}  // namespace belllab
