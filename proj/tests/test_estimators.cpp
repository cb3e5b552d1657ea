#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "anytime/errors.hpp"
#include "anytime/estimators.hpp"

namespace anytime {
namespace {

TEST(SubgaussianF, SpotValues) {
  EXPECT_NEAR(subgaussian_F(1.0, std::log(1.0 / 0.05), 50.0), std::sqrt(2.0 * std::log(40.0) / 50.0),
              1e-15);
  EXPECT_NEAR(subgaussian_F(1.0, 0.0, 2.0), 0.8325546112, 1e-10);
  EXPECT_DOUBLE_EQ(subgaussian_F(2.0, 1.3, 17.0), 2.0 * subgaussian_F(1.0, 1.3, 17.0));
  EXPECT_THROW(subgaussian_F(1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(subgaussian_F(1.0, -1.0, 3.0), DomainError);
}

TEST(DeviationBound, MonotoneOnGrid) {
  const auto F = DeviationBound::sub_gaussian(1.5);
  EXPECT_EQ(F.kind(), DeviationBound::Kind::SubGaussian);
  for (double n = 1; n <= 1e6; n *= 3) {
    for (double t = 0; t <= 20; t += 0.5) {
      EXPECT_LT(F(t, n), F(t + 0.5, n));
      EXPECT_GT(F(t, n), F(t, n * 3));
    }
  }
}

TEST(DoublingUpdate, EpochFreezing) {
  EstimatorState s;
  EXPECT_TRUE(std::isnan(s.estimate()));
  EXPECT_EQ(s.epoch(), -1);
  s = doubling_update(s, 3.0);
  EXPECT_EQ(s.count(), 1u);
  EXPECT_DOUBLE_EQ(s.estimate(), 3.0);

  EstimatorState t;
  t = doubling_update(t, 1.0);
  t = doubling_update(t, 3.0);
  EXPECT_DOUBLE_EQ(t.estimate(), 2.0);
  t = doubling_update(t, 100.0);
  EXPECT_EQ(t.count(), 3u);
  EXPECT_DOUBLE_EQ(t.estimate(), 2.0);
  EXPECT_EQ(t.epoch(), 1);
  t = doubling_update(t, 0.0);
  EXPECT_DOUBLE_EQ(t.estimate(), 26.0);
  EXPECT_EQ(t.epoch(), 2);
}

TEST(DoublingUpdate, EpochIdentityBitForBit) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal(3.0, 10.0);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = normal(rng);
  EstimatorState s;
  for (std::size_t n = 1; n <= xs.size(); ++n) {
    s.update(xs[n - 1]);
    EstimatorState replay;
    const std::size_t epoch_n = std::size_t{1} << static_cast<int>(std::floor(std::log2(n)));
    for (std::size_t i = 0; i < epoch_n; ++i) replay.update(xs[i]);
    ASSERT_EQ(s.estimate(), replay.running_mean()) << "n = " << n;
  }
}

TEST(EstimatorState, CompensatedSumIsExactOnCancellingData) {
  EstimatorState s;
  for (int i = 0; i < 1024; ++i) {
    s.update(1e16);
    s.update(1.0);
    s.update(-1e16);
    s.update(1.0);
  }
  EXPECT_DOUBLE_EQ(s.running_mean(), 0.5);
}

TEST(DoublingWidth, SpotValues) {
  const auto F = DeviationBound::sub_gaussian(1.0);
  EXPECT_NEAR(doubling_width(0.1, F, 16), 1.2518307589, 1e-9);
  const double by_hand = std::sqrt(2.0 * (2.0 * std::log(4.0) + std::log(10.0) + 0.5 + std::log(2.0)) / 8.0);
  EXPECT_NEAR(doubling_width(0.1, F, 16), by_hand, 1e-14);
  EXPECT_TRUE(std::isinf(doubling_width(0.1, F, 1)));
  EXPECT_NEAR(doubling_width(0.1, F, 2), subgaussian_F(1.0, std::log(10.0) + 0.5, 1.0), 1e-15);
  EXPECT_LT(doubling_width(0.1, F, 1u << 20), doubling_width(0.1, F, 1u << 10));
  EXPECT_THROW(doubling_width(1.0, F, 4), DomainError);
}

TEST(DoublingWidth, NonIncreasingFromFour) {
  const auto width = WidthFn::doubling(0.1, DeviationBound::sub_gaussian(1.0));
  for (std::uint64_t n = 4; n < 200000; ++n) ASSERT_LE(width(n + 1), width(n)) << n;
  double prev = width(200000);
  for (double x = 200000; x <= std::ldexp(1.0, 40); x *= 1.01) {
    const double w = width(static_cast<std::uint64_t>(x));
    ASSERT_LE(w, prev);
    prev = w;
  }
}

TEST(DoublingWidth, UnionBoundBudgetSumsToAlpha) {
  const double alpha = 0.1;
  double sum = 0.0;
  for (int k = 1000000; k >= 1; --k) {
    sum += std::exp(-(2.0 * std::log(k) + std::log(1.0 / alpha) + std::log(std::numbers::pi * std::numbers::pi / 6.0)));
  }
  EXPECT_NEAR(sum, alpha, 1e-6);
}

TEST(DoublingWidth, DominatesPerEpochBound) {
  const double alpha = 0.1;
  const auto F = DeviationBound::sub_gaussian(1.0);
  for (std::uint64_t n = 4; n <= (1u << 20); ++n) {
    const int k = std::bit_width(n) - 1;
    const double epoch = F(std::log(std::numbers::pi * std::numbers::pi * k * k / (6.0 * alpha)),
                           std::ldexp(1.0, k));
    ASSERT_GE(doubling_width(alpha, F, n), epoch) << n;
  }
}

TEST(WidthFn, CustomConstantAndTabulate) {
  const auto inv = WidthFn::custom("inverse", [](std::uint64_t n) { return 1.0 / n; });
  EXPECT_EQ(inv.label(), "inverse");
  EXPECT_FALSE(inv.alpha().has_value());
  const auto table = inv.tabulate(4);
  ASSERT_EQ(table.size(), 4u);
  EXPECT_DOUBLE_EQ(table[3], 0.25);
  EXPECT_DOUBLE_EQ(WidthFn::constant(2.0)(123), 2.0);
  EXPECT_EQ(WidthFn::doubling(0.2, DeviationBound::sub_gaussian(1.0)).alpha(), 0.2);
}

TEST(CoverageEvent, Examples) {
  const auto fam = CantorFamily::gaussian(0.0, 1.0, 1.0);
  SamplePath constant;
  constant.values.assign(100, 0.25);
  EXPECT_TRUE(coverage_event(constant, 0.25, WidthFn::constant(0.0), 100));

  const auto noisy = sample_path(fam, BitPrefix::zeros(3), 100, 1);
  EXPECT_FALSE(coverage_event(noisy, 0.0, WidthFn::constant(0.0), 100));
  EXPECT_TRUE(coverage_event(noisy, 0.0, WidthFn::constant(INFINITY), 100));
  EXPECT_THROW(coverage_event(noisy, 0.0, WidthFn::constant(1.0), 101), ArgumentError);
}

TEST(CoverageEvent, FirstFailureIndex) {
  const std::vector<double> values{0.0, 0.0, 5.0, 5.0};
  const std::vector<double> widths{1.0, 1.0, 1.0, 1.0};
  EXPECT_EQ(first_coverage_failure(values, 0.0, widths, 4), std::optional<std::uint64_t>(4));
  EXPECT_EQ(first_coverage_failure(values, 0.0, widths, 3), std::nullopt);
}

TEST(CoverageEvent, SmallMonteCarlo) {
  const auto fam = CantorFamily::gaussian(0.0, 1.0, 1.0);
  const auto width = WidthFn::doubling(0.1, DeviationBound::sub_gaussian(1.0));
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto v = BitPrefix::parse("0110");
    const auto path = sample_path(fam, v, 1024, seed);
    covered += coverage_event(path, cantor_theta(v, fam), width, 1024);
  }
  EXPECT_GE(covered, 170);
}

}  // namespace
}  // namespace anytime
