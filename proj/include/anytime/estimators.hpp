#pragma once

// Time-uniform estimation via geometric epochs: the running mean is frozen
// between powers of two, and a union bound over epochs turns a fixed-n
// deviation bound F into the anytime width
//   t(n) = F(2 log(log2 n) + log(1/alpha) + 1/2, n/2).

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anytime/families.hpp"

namespace anytime {

/// sqrt(2 sigma^2 (t + log 2) / n); F(log(1/alpha), n) is the usual
/// two-sided sub-Gaussian radius sqrt(2 sigma^2 log(2/alpha) / n).
double subgaussian_F(double sigma, double t, double n);

/// High-probability deviation bound F(t, n) of a fixed-n estimator:
/// increasing in t (log-confidence units), decreasing in n.
class DeviationBound {
 public:
  enum class Kind { SubGaussian };

  static DeviationBound sub_gaussian(double sigma);

  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double operator()(double t, double n) const;

 private:
  DeviationBound(Kind kind, double sigma) : kind_(kind), sigma_(sigma) {}

  Kind kind_;
  double sigma_;
};

/// Width of the doubling estimator; +infinity at n = 1.
double doubling_width(double alpha, const DeviationBound& bound, std::uint64_t n);

/// A width function n -> t(n), either the doubling width or an arbitrary
/// user-supplied function.
class WidthFn {
 public:
  static WidthFn doubling(double alpha, DeviationBound bound);
  static WidthFn custom(std::string label, std::function<double(std::uint64_t)> fn);
  static WidthFn constant(double value);

  double operator()(std::uint64_t n) const { return fn_(n); }
  const std::string& label() const { return label_; }
  /// Set for the doubling width only.
  std::optional<double> alpha() const { return alpha_; }

  /// t(1), ..., t(horizon).
  std::vector<double> tabulate(std::uint64_t horizon) const;

 private:
  WidthFn(std::string label, std::function<double(std::uint64_t)> fn, std::optional<double> alpha)
      : label_(std::move(label)), fn_(std::move(fn)), alpha_(alpha) {}

  std::string label_;
  std::function<double(std::uint64_t)> fn_;
  std::optional<double> alpha_;
};

/// Running mean with Neumaier-compensated summation, plus the estimate frozen
/// at the most recent power-of-two sample count.
class EstimatorState {
 public:
  void update(double x);

  std::uint64_t count() const { return n_; }
  double running_mean() const;
  /// theta^tu_n = running mean at n' = 2^floor(log2 n). NaN before any data.
  double estimate() const { return epoch_estimate_; }
  /// floor(log2 n), or -1 before any data.
  int epoch() const { return epoch_; }

 private:
  std::uint64_t n_ = 0;
  double sum_ = 0.0;
  double compensation_ = 0.0;
  double epoch_estimate_ = std::numeric_limits<double>::quiet_NaN();
  int epoch_ = -1;
};

EstimatorState doubling_update(EstimatorState state, double x);

/// First n <= horizon with |theta^tu_n - theta_true| > widths[n - 1], if any.
/// `widths` must hold at least `horizon` entries (t(1), t(2), ...).
std::optional<std::uint64_t> first_coverage_failure(std::span<const double> values,
                                                    double theta_true,
                                                    std::span<const double> widths,
                                                    std::uint64_t horizon);

/// True iff |theta^tu_n - theta_true| <= t(n) for every n <= horizon.
/// Throws ArgumentError if the path is shorter than the horizon.
bool coverage_event(const SamplePath& path, double theta_true, const WidthFn& width,
                    std::uint64_t horizon);

}  // namespace anytime
