#pragma once

// Estimation -> sequential testing. An estimator with width t(.) yields bit
// tests: at n_k = inf{n : t(n) < delta_k / 2}, project the estimate onto the
// nearest Cantor point and read off its k-th bit. On the estimator's
// coverage event every bit is correct.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "anytime/estimators.hpp"
#include "anytime/families.hpp"

namespace anytime {

inline constexpr std::uint64_t kDefaultScheduleLimit = std::uint64_t{1} << 50;

/// Depth-K prefix of a nearest point of {theta(v)} to theta_hat. Resolved one
/// ternary digit at a time; exact ties (the centre of a removed middle third)
/// go to bit 0.
BitPrefix project_vhat(double theta_hat, const CantorFamily& fam, std::size_t depth);

/// k-th bit of project_vhat(theta_hat, fam, k).
int derived_test_bit(double theta_hat_at_nk, const CantorFamily& fam, std::size_t k);

/// Smallest n <= n_max with t(n) < delta_k / 2. n < 64 is scanned linearly;
/// beyond that t is assumed non-increasing and searched by doubling then
/// bisection. Throws ScheduleExhausted if no such n exists.
std::uint64_t compute_nk(const WidthFn& width, double delta_k,
                         std::uint64_t n_max = kDefaultScheduleLimit);

/// Strictly increasing sample counts n_1 < n_2 < ... (1-based access).
class TestSchedule {
 public:
  TestSchedule() = default;
  /// Throws ArgumentError unless strictly increasing and >= 1.
  explicit TestSchedule(std::vector<std::uint64_t> counts);

  std::size_t size() const { return counts_.size(); }
  std::uint64_t at(std::size_t k) const { return counts_.at(k - 1); }
  std::span<const std::uint64_t> counts() const { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
};

/// n_k for k = 1..depth using delta_k of the family. Stops early (returning a
/// shorter schedule) at the first depth whose n_k exceeds n_max.
TestSchedule compute_schedule(const WidthFn& width, const CantorFamily& fam, std::size_t depth,
                              std::uint64_t n_max = kDefaultScheduleLimit);

/// Per-depth counts for the empirical conditional error
///   P(Vhat_k != v_k | Vhat_{1:k-1} = v_{1:k-1}).
class CondErrLedger {
 public:
  CondErrLedger() = default;
  explicit CondErrLedger(std::size_t depth);

  std::size_t depth() const { return trials_.size(); }

  /// Requires both prefixes to have at least depth() bits.
  void record(const BitPrefix& v, const BitPrefix& vhat);
  /// Pointwise sum; throws DimensionError on depth mismatch.
  void merge(const CondErrLedger& other);

  std::uint64_t trials(std::size_t k) const { return trials_.at(k - 1); }
  std::uint64_t errors(std::size_t k) const { return errors_.at(k - 1); }
  bool observed(std::size_t k) const { return trials(k) > 0; }
  /// errors / trials, or 0 for an unobserved depth.
  double cond_err(std::size_t k) const;
  /// sqrt(p (1 - p) / trials), 0 when unobserved.
  double std_error(std::size_t k) const;

  double total_cond_err() const;
  /// Standard error of total_cond_err(), treating depths as independent.
  double total_std_error() const;

  friend bool operator==(const CondErrLedger&, const CondErrLedger&) = default;

 private:
  std::vector<std::uint64_t> trials_;
  std::vector<std::uint64_t> errors_;
};

CondErrLedger ledger_update(CondErrLedger ledger, const BitPrefix& v, const BitPrefix& vhat_bits);

/// alpha / (1 - alpha): the most total conditional error an
/// (alpha, {n_k})-test can afford.
double cond_err_budget(double alpha);

/// CSV with header k,trials,errors,cond_err_hat,lower_bound_quarter_exp.
/// `floors[k-1]` fills the last column; missing entries are left empty.
void write_ledger_csv(std::ostream& out, const CondErrLedger& ledger,
                      std::span<const double> floors = {});

}  // namespace anytime
