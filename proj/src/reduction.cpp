#include "anytime/reduction.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "anytime/errors.hpp"

namespace anytime {

BitPrefix project_vhat(double theta_hat, const CantorFamily& fam, std::size_t depth) {
  std::vector<std::uint8_t> bits(depth);
  double lo = fam.theta0();
  double width = fam.r();
  for (std::size_t i = 0; i < depth; ++i) {
    // The two child hulls [lo, lo + w/3] and [lo + 2w/3, lo + w] are mirror
    // images about the midpoint, so the nearer one is decided by which side
    // of it theta_hat falls on.
    const double mid = lo + 0.5 * width;
    const bool right = theta_hat > mid;
    width /= 3.0;
    if (right) lo += 2.0 * width;
    bits[i] = right ? 1 : 0;
  }
  return BitPrefix(std::move(bits));
}

int derived_test_bit(double theta_hat_at_nk, const CantorFamily& fam, std::size_t k) {
  if (k < 1) throw ArgumentError("test index k must be >= 1");
  return project_vhat(theta_hat_at_nk, fam, k).bit(k);
}

std::uint64_t compute_nk(const WidthFn& width, double delta_k, std::uint64_t n_max) {
  if (!(delta_k > 0.0)) throw DomainError("separation delta_k must be positive");
  if (n_max < 1) throw ScheduleExhausted("empty search range");
  const double threshold = 0.5 * delta_k;
  auto below = [&](std::uint64_t n) { return width(n) < threshold; };

  constexpr std::uint64_t kHead = 64;
  for (std::uint64_t n = 1; n < kHead && n <= n_max; ++n) {
    if (below(n)) return n;
  }
  if (n_max < kHead) throw ScheduleExhausted("no n <= n_max with t(n) < delta_k / 2");

  std::uint64_t lo = kHead - 1;  // known to fail
  std::uint64_t hi = kHead;
  while (!below(hi)) {
    if (hi == n_max) throw ScheduleExhausted("no n <= n_max with t(n) < delta_k / 2");
    lo = hi;
    hi = hi > n_max / 2 ? n_max : 2 * hi;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (below(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

TestSchedule::TestSchedule(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 1) throw ArgumentError("schedule counts must be >= 1");
    if (i > 0 && counts_[i] <= counts_[i - 1]) {
      throw ArgumentError("schedule counts must be strictly increasing");
    }
  }
}

TestSchedule compute_schedule(const WidthFn& width, const CantorFamily& fam, std::size_t depth,
                              std::uint64_t n_max) {
  std::vector<std::uint64_t> counts;
  for (std::size_t k = 1; k <= depth; ++k) {
    try {
      counts.push_back(compute_nk(width, separation_delta(static_cast<int>(k), fam), n_max));
    } catch (const ScheduleExhausted&) {
      break;
    }
    // A width that is flat across two scales would repeat n_k; the schedule
    // needs distinct sample counts, so keep the prefix that is increasing.
    if (counts.size() > 1 && counts.back() <= counts[counts.size() - 2]) {
      counts.pop_back();
      break;
    }
  }
  return TestSchedule(std::move(counts));
}

CondErrLedger::CondErrLedger(std::size_t depth) : trials_(depth, 0), errors_(depth, 0) {}

void CondErrLedger::record(const BitPrefix& v, const BitPrefix& vhat) {
  if (vhat.size() < depth()) throw ArgumentError("test outcomes shorter than the ledger depth");
  for (std::size_t k = 1; k <= depth(); ++k) {
    // conditioning event: all earlier bits correct
    ++trials_[k - 1];
    if (vhat.bit(k) != v.bit(k)) {
      ++errors_[k - 1];
      return;
    }
  }
}

void CondErrLedger::merge(const CondErrLedger& other) {
  if (other.depth() != depth()) throw DimensionError("ledger depths differ");
  for (std::size_t i = 0; i < depth(); ++i) {
    trials_[i] += other.trials_[i];
    errors_[i] += other.errors_[i];
  }
}

double CondErrLedger::cond_err(std::size_t k) const {
  const auto t = trials(k);
  return t == 0 ? 0.0 : static_cast<double>(errors(k)) / static_cast<double>(t);
}

double CondErrLedger::std_error(std::size_t k) const {
  const auto t = trials(k);
  if (t == 0) return 0.0;
  const double p = cond_err(k);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(t));
}

double CondErrLedger::total_cond_err() const {
  double s = 0.0;
  for (std::size_t k = 1; k <= depth(); ++k) s += cond_err(k);
  return s;
}

double CondErrLedger::total_std_error() const {
  double v = 0.0;
  for (std::size_t k = 1; k <= depth(); ++k) v += std_error(k) * std_error(k);
  return std::sqrt(v);
}

CondErrLedger ledger_update(CondErrLedger ledger, const BitPrefix& v, const BitPrefix& vhat_bits) {
  ledger.record(v, vhat_bits);
  return ledger;
}

double cond_err_budget(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return alpha / (1.0 - alpha);
}

void write_ledger_csv(std::ostream& out, const CondErrLedger& ledger,
                      std::span<const double> floors) {
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << "k,trials,errors,cond_err_hat,lower_bound_quarter_exp\n";
  out << std::setprecision(12);
  for (std::size_t k = 1; k <= ledger.depth(); ++k) {
    out << k << ',' << ledger.trials(k) << ',' << ledger.errors(k) << ',' << ledger.cond_err(k)
        << ',';
    if (k <= floors.size()) out << floors[k - 1];
    out << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace anytime
