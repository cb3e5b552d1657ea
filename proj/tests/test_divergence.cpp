#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "anytime/divergence.hpp"
#include "anytime/errors.hpp"

namespace anytime {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Nats, RejectsNegativeAndNan) {
  EXPECT_THROW(Nats(-1e-3), DomainError);
  EXPECT_THROW(Nats(std::nan("")), DomainError);
  EXPECT_TRUE(Nats::infinity().is_infinite());
  EXPECT_LT(Nats(0.1), Nats(0.2));
}

TEST(FiniteDist, ValidatesSimplex) {
  EXPECT_THROW(FiniteDist({0.5, 0.6}), DomainError);
  EXPECT_THROW(FiniteDist({1.2, -0.2}), DomainError);
  EXPECT_THROW(FiniteDist({}), DomainError);
  EXPECT_NO_THROW(FiniteDist({0.5, 0.5 + 5e-13}));
  EXPECT_DOUBLE_EQ(FiniteDist::uniform(4)[2], 0.25);
}

TEST(EventSet, RejectsEmptyAndOutOfRange) {
  EXPECT_THROW(EventSet({}), ArgumentError);
  EventSet s({3, 1, 3});
  EXPECT_EQ(s.indices().size(), 2u);
  EXPECT_TRUE(s.contains(1));
  EXPECT_FALSE(s.contains(2));
  EXPECT_THROW(FiniteDist::uniform(3).mass(s), DimensionError);
}

TEST(KlFinite, SpotValues) {
  EXPECT_DOUBLE_EQ(kl_finite(FiniteDist({0.5, 0.5}), FiniteDist({0.5, 0.5})).value(), 0.0);
  EXPECT_NEAR(kl_finite(FiniteDist({0.6, 0.4}), FiniteDist({0.4, 0.6})).value(), 0.0810930216,
              1e-10);
  EXPECT_TRUE(kl_finite(FiniteDist({1.0, 0.0}), FiniteDist({0.0, 1.0})).is_infinite());
  EXPECT_THROW(kl_finite(FiniteDist::uniform(2), FiniteDist::uniform(3)), DimensionError);
}

TEST(TvFinite, SpotValues) {
  EXPECT_DOUBLE_EQ(tv_finite(FiniteDist::uniform(3), FiniteDist::uniform(3)), 0.0);
  EXPECT_DOUBLE_EQ(tv_finite(FiniteDist({1.0, 0.0}), FiniteDist({0.0, 1.0})), 1.0);
  EXPECT_NEAR(tv_finite(FiniteDist({0.6, 0.4}), FiniteDist({0.4, 0.6})), 0.2, 1e-15);
  EXPECT_THROW(tv_finite(FiniteDist::uniform(2), FiniteDist::uniform(3)), DimensionError);
}

TEST(KlBernoulli, SpotValuesAndDomain) {
  EXPECT_DOUBLE_EQ(kl_bernoulli(0.5, 0.5).value(), 0.0);
  EXPECT_NEAR(kl_bernoulli(0.6, 0.4).value(), 0.0810930216, 1e-10);
  EXPECT_NEAR(kl_bernoulli(0.5, 0.25).value(), 0.1438410362, 1e-10);
  EXPECT_THROW(kl_bernoulli(0.0, 0.5), DomainError);
  EXPECT_THROW(kl_bernoulli(0.5, 1.0), DomainError);
}

TEST(KlGaussianLoc, SpotValues) {
  EXPECT_DOUBLE_EQ(kl_gaussian_loc(0.0, 1.0).value(), 0.0);
  EXPECT_DOUBLE_EQ(kl_gaussian_loc(1.0, 1.0).value(), 0.5);
  EXPECT_DOUBLE_EQ(kl_gaussian_loc(2.0, 2.0).value(), 0.5);
  EXPECT_THROW(kl_gaussian_loc(1.0, 0.0), DomainError);
}

TEST(KlCauchyLoc, SpotValues) {
  EXPECT_DOUBLE_EQ(kl_cauchy_loc(0.0, 1.0).value(), 0.0);
  EXPECT_NEAR(kl_cauchy_loc(2.0, 1.0).value(), std::log(2.0), 1e-15);
  EXPECT_NEAR(kl_cauchy_loc(0.1, 1.0).value(), 0.0024968802, 1e-10);
  EXPECT_DOUBLE_EQ(kl_cauchy_loc_upper(0.1, 1.0), 0.0025);
  EXPECT_THROW(kl_cauchy_loc(1.0, -1.0), DomainError);
}

TEST(KlLogisticGlm, SpotValues) {
  EXPECT_DOUBLE_EQ(kl_logistic_glm(1.0, 1.0, CovariateDist::rademacher()).value(), 0.0);
  EXPECT_NEAR(kl_logistic_glm(0.0, 1.0, CovariateDist::point(1.0)).value(), 0.4337808305, 1e-10);
}

TEST(KlLogisticGlm, BregmanBoundSweep) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + trial % 5;
    std::vector<double> values(m);
    for (auto& x : values) x = xs(rng);
    const CovariateDist cov(values, random_interior_dist(m, rng));
    for (double theta = -2.0; theta <= 2.0; theta += 0.5) {
      for (double delta = -1.0; delta <= 1.0; delta += 0.25) {
        const double kl = kl_logistic_glm(theta, theta + delta, cov).value();
        EXPECT_LE(kl, 0.5 * cov.second_moment() * delta * delta + 1e-12);
      }
    }
  }
}

TEST(KlLogisticGlm, PointCovariateBound) {
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (double delta : {0.01, 0.1, 0.5, 1.0, 3.0}) {
      EXPECT_LE(kl_logistic_glm(0.0, delta, CovariateDist::point(x)).value(),
                x * x * delta * delta / 2.0 + 1e-15);
    }
  }
}

TEST(LogisticLogPartition, DerivativesMatchFiniteDifferences) {
  for (double x : {-2.0, 0.3, 1.0}) {
    for (double theta : {-1.5, 0.0, 0.7}) {
      const double h = 1e-5;
      const double d1 = (logistic_log_partition(theta + h, x) - logistic_log_partition(theta - h, x)) / (2 * h);
      const double d2 = (logistic_log_partition_d1(theta + h, x) -
                         logistic_log_partition_d1(theta - h, x)) / (2 * h);
      EXPECT_NEAR(logistic_log_partition_d1(theta, x), d1, 1e-8);
      EXPECT_NEAR(logistic_log_partition_d2(theta, x), d2, 1e-7);
      EXPECT_LE(logistic_log_partition_d2(theta, x), x * x + 1e-15);
    }
  }
  EXPECT_TRUE(std::isfinite(logistic_log_partition(800.0, 2.0)));
}

TEST(BhTvUpper, SpotValues) {
  EXPECT_DOUBLE_EQ(bh_tv_upper(Nats(0.0)), 0.5);
  EXPECT_DOUBLE_EQ(bh_tv_upper(Nats::infinity()), 1.0);
  EXPECT_DOUBLE_EQ(bh_tv_upper(Nats(std::log(2.0))), 0.75);
}

TEST(LeCamErrorLower, SpotValuesAndDomain) {
  EXPECT_DOUBLE_EQ(le_cam_error_lower(0.0), 1.0);
  EXPECT_DOUBLE_EQ(le_cam_error_lower(1.0), 0.0);
  EXPECT_DOUBLE_EQ(le_cam_error_lower(0.2), 0.8);
  EXPECT_THROW(le_cam_error_lower(1.5), DomainError);
  EXPECT_THROW(le_cam_error_lower(-0.1), DomainError);
}

TEST(KlConditionalExact, SpotValues) {
  const FiniteDist p({0.5, 0.3, 0.2});
  const auto same = kl_conditional_exact(p, p, EventSet({0, 2}));
  EXPECT_DOUBLE_EQ(same.conditional.value(), 0.0);
  EXPECT_DOUBLE_EQ(same.bound.value(), 0.0);

  const auto c = kl_conditional_exact(p, FiniteDist::uniform(3), EventSet({0, 1}));
  EXPECT_NEAR(c.conditional.value(), 0.0315839424, 1e-10);
  EXPECT_NEAR(c.bound.value(), 0.0861990933, 1e-10);

  const auto flat = kl_conditional_exact(FiniteDist({0.4, 0.4, 0.1, 0.1}), FiniteDist::uniform(4),
                                         EventSet({0, 1}));
  EXPECT_NEAR(flat.conditional.value(), 0.0, 1e-15);
  EXPECT_LE(flat.conditional, flat.bound);
}

TEST(KlConditionalExact, ZeroMassEventThrows) {
  const FiniteDist p({0.0, 1.0});
  const FiniteDist q({0.5, 0.5});
  EXPECT_THROW(kl_conditional_exact(p, q, EventSet({0})), ConditioningError);
  EXPECT_THROW(kl_conditional_exact(q, p, EventSet({0})), ConditioningError);
}

TEST(RandomInteriorDist, StaysInsideSimplex) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_interior_dist(1 + i % 8, rng);
    double total = 0.0;
    for (double x : p.probs()) {
      EXPECT_GE(x, kFuzzFloor);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

// Brute force: tv equals the largest P(A) - Q(A) over all subsets A.
TEST(DivergenceProperties, RandomPairs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto p = random_interior_dist(n, rng);
    const auto q = random_interior_dist(n, rng);
    const double kl = kl_finite(p, q).value();
    const double tv = tv_finite(p, q);
    EXPECT_GE(kl, 0.0);
    EXPECT_LE(tv, bh_tv_upper(Nats(kl)) + 1e-12);
    double sup = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask >> j & 1u) d += p[j] - q[j];
      }
      sup = std::max(sup, d);
    }
    EXPECT_NEAR(tv, sup, 1e-12);
    const EventSet s = random_event(n, rng);
    EXPECT_GE(p.mass(s) + 1.0 - q.mass(s), le_cam_error_lower(tv) - 1e-12);
    const auto c = kl_conditional_exact(p, q, s);
    EXPECT_LE(c.conditional.value(), c.bound.value() + 1e-9);
  }
}

TEST(DivergenceProperties, KlZeroIffEqual) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_interior_dist(2 + trial % 6, rng);
    EXPECT_NEAR(kl_finite(p, p).value(), 0.0, 1e-12);
    const auto q = random_interior_dist(p.size(), rng);
    if (tv_finite(p, q) > 1e-6) EXPECT_GT(kl_finite(p, q).value(), 0.0);
  }
}

TEST(FisherTaylor, CauchyAndGaussian) {
  for (double sigma : {0.5, 1.0, 3.0}) {
    const double delta = 0.01 * sigma;
    const double ratio = kl_cauchy_loc(delta, sigma).value() / (delta * delta);
    EXPECT_LE(std::abs(ratio - 0.25 / (sigma * sigma)) / (0.25 / (sigma * sigma)), 1e-3);
    EXPECT_DOUBLE_EQ(kl_gaussian_loc(delta, sigma).value(),
                     0.5 * (1.0 / (sigma * sigma)) * delta * delta);
  }
  EXPECT_LE(std::abs(kl_cauchy_loc(0.01, 1.0).value() / 1e-4 - 0.25), 2.5e-4);
}

}  // namespace
}  // namespace anytime
