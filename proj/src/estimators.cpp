#include "anytime/estimators.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "anytime/errors.hpp"

namespace anytime {

double subgaussian_F(double sigma, double t, double n) {
  if (!(n > 0.0)) throw DomainError("deviation bound needs n >= 1");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(t >= 0.0)) throw DomainError("log-confidence t must be non-negative");
  return std::sqrt(2.0 * sigma * sigma * (t + std::numbers::ln2) / n);
}

DeviationBound DeviationBound::sub_gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  return DeviationBound(Kind::SubGaussian, sigma);
}

double DeviationBound::operator()(double t, double n) const {
  return subgaussian_F(sigma_, t, n);
}

double doubling_width(double alpha, const DeviationBound& bound, std::uint64_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (n <= 1) return std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  // log2 n >= 1 here, so the outer (natural) log is >= 0; exactly 0 at n = 2.
  const double loglog = std::log(std::log2(nd));
  return bound(2.0 * loglog + std::log(1.0 / alpha) + 0.5, nd / 2.0);
}

WidthFn WidthFn::doubling(double alpha, DeviationBound bound) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return WidthFn(
      "doubling", [alpha, bound](std::uint64_t n) { return doubling_width(alpha, bound, n); },
      alpha);
}

WidthFn WidthFn::custom(std::string label, std::function<double(std::uint64_t)> fn) {
  return WidthFn(std::move(label), std::move(fn), std::nullopt);
}

WidthFn WidthFn::constant(double value) {
  return WidthFn("constant", [value](std::uint64_t) { return value; }, std::nullopt);
}

std::vector<double> WidthFn::tabulate(std::uint64_t horizon) const {
  std::vector<double> out(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) out[n - 1] = fn_(n);
  return out;
}

void EstimatorState::update(double x) {
  ++n_;
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
  if (std::has_single_bit(n_)) {
    epoch_estimate_ = running_mean();
    epoch_ = std::bit_width(n_) - 1;
  }
}

double EstimatorState::running_mean() const {
  if (n_ == 0) return std::numeric_limits<double>::quiet_NaN();
  return (sum_ + compensation_) / static_cast<double>(n_);
}

EstimatorState doubling_update(EstimatorState state, double x) {
  state.update(x);
  return state;
}

std::optional<std::uint64_t> first_coverage_failure(std::span<const double> values,
                                                    double theta_true,
                                                    std::span<const double> widths,
                                                    std::uint64_t horizon) {
  if (values.size() < horizon || widths.size() < horizon) {
    throw ArgumentError("path or width table shorter than the horizon");
  }
  EstimatorState state;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    state.update(values[n - 1]);
    if (!(std::abs(state.estimate() - theta_true) <= widths[n - 1])) return n;
  }
  return std::nullopt;
}

bool coverage_event(const SamplePath& path, double theta_true, const WidthFn& width,
                    std::uint64_t horizon) {
  if (horizon < 1) throw ArgumentError("horizon must be >= 1");
  if (path.size() < horizon) throw ArgumentError("sample path shorter than the horizon");
  const auto widths = width.tabulate(horizon);
  return !first_coverage_failure(path.values, theta_true, widths, horizon).has_value();
}

}  // namespace anytime
