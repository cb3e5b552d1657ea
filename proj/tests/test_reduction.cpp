#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "anytime/errors.hpp"
#include "anytime/reduction.hpp"

namespace anytime {
namespace {

const CantorFamily kUnit = CantorFamily::gaussian(0.0, 1.0, 1.0);

// Nearest depth-K hull [theta(u 000...), theta(u 111...)] by exhaustive
// search, lexicographically smallest prefix on ties.
BitPrefix argmin_oracle(double theta_hat, const CantorFamily& fam, int depth) {
  double best = std::numeric_limits<double>::infinity();
  BitPrefix best_u;
  for (unsigned idx = 0; idx < (1u << depth); ++idx) {
    std::vector<std::uint8_t> bits(depth);
    for (int j = 0; j < depth; ++j) bits[j] = (idx >> (depth - 1 - j)) & 1u;
    const double lo = cantor_theta(BitPrefix(bits, Tail::AllZeros), fam);
    const double hi = cantor_theta(BitPrefix(bits, Tail::AllOnes), fam);
    const double d = theta_hat < lo ? lo - theta_hat : (theta_hat > hi ? theta_hat - hi : 0.0);
    if (d < best) {
      best = d;
      best_u = BitPrefix(bits);
    }
  }
  return best_u;
}

TEST(ProjectVhat, NetPointsProjectToThemselves) {
  std::mt19937_64 rng(21);
  std::bernoulli_distribution coin(0.5);
  const auto fam = CantorFamily::gaussian(-1.0, 2.5, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    auto v = random_prefix(12, rng);
    v = BitPrefix(std::vector<std::uint8_t>(v.bits().begin(), v.bits().end()),
                  coin(rng) ? Tail::AllOnes : Tail::AllZeros);
    const auto vhat = project_vhat(cantor_theta(v, fam), fam, 12);
    EXPECT_EQ(first_difference(vhat, v, 12), 0u) << v.to_string();
  }
}

TEST(ProjectVhat, MatchesExhaustiveArgmin) {
  std::mt19937_64 rng(22);
  const auto fam = CantorFamily::gaussian(0.5, 2.0, 1.0);
  std::uniform_real_distribution<double> theta(0.5 - 0.4, 0.5 + 2.4);
  for (int trial = 0; trial < 3000; ++trial) {
    const double t = theta(rng);
    EXPECT_EQ(project_vhat(t, fam, 8), argmin_oracle(t, fam, 8)) << t;
  }
}

TEST(ProjectVhat, TieAndOutOfRange) {
  // 0.5 is the centre of the first removed third: equidistant (1/6) from
  // theta(0111...) and theta(1000...). Ties go to bit 0.
  EXPECT_EQ(project_vhat(0.5, kUnit, 5).to_string(), "01111");
  EXPECT_EQ(project_vhat(-3.0, kUnit, 6).to_string(), "000000");
  EXPECT_EQ(project_vhat(7.0, kUnit, 6).to_string(), "111111");
  EXPECT_EQ(project_vhat(0.1, kUnit, 0).size(), 0u);
}

TEST(DerivedTestBit, Examples) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto v = random_prefix(12, rng);
    const double theta = cantor_theta(v, kUnit);
    for (std::size_t k = 1; k <= 12; ++k) {
      const double noise = 0.4999 * separation_delta(static_cast<int>(k), kUnit) * unit(rng);
      EXPECT_EQ(derived_test_bit(theta + noise, kUnit, k), v.bit(k));
      EXPECT_EQ(project_vhat(theta + noise, kUnit, k), v.prefix(k));
      EXPECT_EQ(derived_test_bit(theta, kUnit, k), v.bit(k));
    }
    const std::size_t k = 1 + trial % 12;
    std::vector<std::uint8_t> bits(v.bits().begin(), v.bits().end());
    bits[k - 1] ^= 1;
    const BitPrefix w(bits);
    EXPECT_EQ(derived_test_bit(cantor_theta(w, kUnit), kUnit, k), w.bit(k));
    EXPECT_NE(derived_test_bit(cantor_theta(w, kUnit), kUnit, k), v.bit(k));
  }
  EXPECT_THROW(derived_test_bit(0.0, kUnit, 0), ArgumentError);
}

TEST(ComputeNk, Examples) {
  const auto inv = WidthFn::custom("inverse", [](std::uint64_t n) { return 1.0 / static_cast<double>(n); });
  EXPECT_EQ(compute_nk(inv, 0.2), 11u);
  EXPECT_EQ(compute_nk(inv, 2e-3), 1001u);
  EXPECT_THROW(compute_nk(WidthFn::constant(std::numeric_limits<double>::infinity()), 0.1),
               ScheduleExhausted);
  EXPECT_THROW(compute_nk(inv, 2e-3, 1000), ScheduleExhausted);
  EXPECT_EQ(compute_nk(inv, 2e-3, 1001), 1001u);
  EXPECT_THROW(compute_nk(inv, 0.0), DomainError);
}

std::uint64_t linear_scan(const WidthFn& width, double delta) {
  std::uint64_t n = 1;
  while (!(width(n) < delta / 2)) ++n;
  return n;
}

TEST(ComputeNk, DoublingWidthMatchesLinearScan) {
  const auto width = WidthFn::doubling(0.1, DeviationBound::sub_gaussian(1.0));
  for (int k = 1; k <= 6; ++k) {
    const double delta = separation_delta(k, kUnit);
    EXPECT_EQ(compute_nk(width, delta), linear_scan(width, delta)) << "k = " << k;
  }
}

// Beyond the affordable scan, verify the defining boundary of the infimum
// plus monotonicity of the width below it.
TEST(ComputeNk, DoublingWidthBoundaryForDeeperLevels) {
  const auto width = WidthFn::doubling(0.1, DeviationBound::sub_gaussian(1.0));
  for (int k = 7; k <= 12; ++k) {
    const double delta = separation_delta(k, kUnit);
    const auto n = compute_nk(width, delta);
    EXPECT_LT(width(n), delta / 2);
    EXPECT_GE(width(n - 1), delta / 2);
    for (std::uint64_t m = 4; m < n; m = m + m / 3 + 1) EXPECT_GE(width(m), delta / 2);
  }
}

TEST(Schedule, IncreasingAndTruncated) {
  const auto width = WidthFn::doubling(0.1, DeviationBound::sub_gaussian(1.0));
  const auto schedule = compute_schedule(width, kUnit, 12);
  ASSERT_EQ(schedule.size(), 12u);
  for (std::size_t k = 2; k <= 12; ++k) EXPECT_GT(schedule.at(k), schedule.at(k - 1));
  const auto short_schedule = compute_schedule(width, kUnit, 12, std::uint64_t{1} << 15);
  EXPECT_EQ(short_schedule.size(), 2u);
  EXPECT_THROW(TestSchedule({3, 3}), ArgumentError);
  EXPECT_THROW(TestSchedule({0, 3}), ArgumentError);
}

TEST(Ledger, UpdateExamples) {
  CondErrLedger ledger(4);
  const auto v = BitPrefix::parse("0110");
  ledger = ledger_update(ledger, v, v);
  for (std::size_t k = 1; k <= 4; ++k) {
    EXPECT_EQ(ledger.trials(k), 1u);
    EXPECT_EQ(ledger.errors(k), 0u);
  }
  ledger = ledger_update(ledger, v, BitPrefix::parse("0010"));
  EXPECT_EQ(ledger.trials(1), 2u);
  EXPECT_EQ(ledger.trials(2), 2u);
  EXPECT_EQ(ledger.errors(2), 1u);
  EXPECT_EQ(ledger.trials(3), 1u);
  EXPECT_EQ(ledger.trials(4), 1u);
  EXPECT_THROW(ledger.record(v, BitPrefix::parse("01")), ArgumentError);
}

TEST(Ledger, UnobservedDepthReportsZero) {
  CondErrLedger ledger(3);
  ledger.record(BitPrefix::parse("000"), BitPrefix::parse("100"));
  EXPECT_TRUE(ledger.observed(1));
  EXPECT_FALSE(ledger.observed(2));
  EXPECT_DOUBLE_EQ(ledger.cond_err(2), 0.0);
  EXPECT_DOUBLE_EQ(ledger.std_error(2), 0.0);
  EXPECT_DOUBLE_EQ(ledger.cond_err(1), 1.0);
}

// Flipping each test bit independently with probability p makes every
// conditional error rate equal to p.
TEST(Ledger, ConsistentOnSyntheticTest) {
  const double p = 0.2;
  const std::size_t depth = 5;
  std::mt19937_64 rng(31);
  std::bernoulli_distribution flip(p);
  CondErrLedger ledger(depth);
  for (int rep = 0; rep < 20000; ++rep) {
    const auto v = random_prefix(depth, rng);
    std::vector<std::uint8_t> bits(v.bits().begin(), v.bits().end());
    for (auto& b : bits) b ^= flip(rng) ? 1 : 0;
    ledger.record(v, BitPrefix(bits));
  }
  for (std::size_t k = 1; k <= depth; ++k) {
    EXPECT_LE(ledger.errors(k), ledger.trials(k));
    if (k > 1) EXPECT_LE(ledger.trials(k), ledger.trials(k - 1));
    EXPECT_NEAR(ledger.cond_err(k), p, 4.0 * ledger.std_error(k)) << k;
  }
}

TEST(Ledger, MergeIsOrderIndependent) {
  std::mt19937_64 rng(32);
  std::vector<CondErrLedger> parts;
  for (int w = 0; w < 6; ++w) {
    CondErrLedger l(4);
    for (int rep = 0; rep < 50; ++rep) l.record(random_prefix(4, rng), random_prefix(4, rng));
    parts.push_back(l);
  }
  CondErrLedger forward(4);
  for (const auto& l : parts) forward.merge(l);
  CondErrLedger backward(4);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) backward.merge(*it);
  CondErrLedger paired(4);
  for (std::size_t i = 0; i < parts.size(); i += 2) {
    CondErrLedger pair = parts[i + 1];
    pair.merge(parts[i]);
    paired.merge(pair);
  }
  EXPECT_EQ(forward, backward);
  EXPECT_EQ(forward, paired);
  EXPECT_THROW(forward.merge(CondErrLedger(3)), DimensionError);
}

TEST(Ledger, CsvFormat) {
  CondErrLedger ledger(2);
  ledger.record(BitPrefix::parse("01"), BitPrefix::parse("00"));
  ledger.record(BitPrefix::parse("01"), BitPrefix::parse("01"));
  std::ostringstream out;
  const double floors[] = {0.25};
  write_ledger_csv(out, ledger, floors);
  EXPECT_EQ(out.str(),
            "k,trials,errors,cond_err_hat,lower_bound_quarter_exp\n"
            "1,2,0,0,0.25\n"
            "2,2,1,0.5,\n");
}

TEST(CondErrBudget, Values) {
  EXPECT_NEAR(cond_err_budget(0.1), 0.111111111111, 1e-12);
  EXPECT_DOUBLE_EQ(cond_err_budget(0.5), 1.0);
  EXPECT_LT(cond_err_budget(1e-12), 1.1e-12);
  EXPECT_THROW(cond_err_budget(0.0), DomainError);
  EXPECT_THROW(cond_err_budget(1.0), DomainError);
}

}  // namespace
}  // namespace anytime
