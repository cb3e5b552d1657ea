#pragma once

// Closed-form lower bounds on the width t(n) of any (alpha, t)-estimator,
// and the check that ties a concrete estimator's test schedule to the
// necessary condition n_k > (1 - alpha) Delta_k^{-1} log k.
//
// log log n uses the natural log twice; only the doubling width (see
// estimators.hpp) uses log2 inside.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "anytime/divergence.hpp"
#include "anytime/estimators.hpp"
#include "anytime/families.hpp"
#include "anytime/reduction.hpp"

namespace anytime {

/// sqrt((1 - alpha) / (8 M)) * sqrt(log log n / n); needs n >= 16.
double lb_loglog(double n, double alpha, double M);

/// (1/2) sqrt(log(1 / (4 alpha)) / (M n)); needs alpha < 1/4.
double lb_fixed_alpha(double n, double alpha, double M);

/// (1/4) exp(-n M delta^2): the larger of the two error probabilities of any
/// test between theta and theta + delta is at least this.
double two_point_error_lb(double n, double M, double delta);

/// Summed error 2 Phi(-sqrt(n) delta / (2 sigma)) of the midpoint test
/// between N(0, sigma^2) and N(delta, sigma^2) with n samples.
double gaussian_two_point_error(double n, double delta, double sigma);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

/// (1 - alpha) log(k) / Delta_k; needs k >= 2.
double testing_lb_threshold(int k, Nats Delta_k, double alpha);

/// (1/4) exp(-Delta_k n_k / (1 - alpha)).
double indiv_cond_err_lb(Nats Delta_k, double n_k, double alpha);

/// grad^T I^{-1} grad via a Cholesky solve. Throws DimensionError on shape
/// mismatch or dimension > 64, DecompositionError if I is not symmetric
/// positive definite.
double semiparam_constant(const Eigen::VectorXd& grad_phi, const Eigen::MatrixXd& fisher);

/// (1/4) sqrt((1 - alpha) c) sqrt(log log n / n) for an influence-function
/// second moment c; needs n >= 16.
double semiparam_lower_bound(double n, double alpha, double c);

/// A lower (or upper) bound curve n -> value with its validity range.
struct BoundCurve {
  std::string label;
  std::function<double(double)> eval;
  double n_min;
  double n_max;

  bool in_domain(double n) const { return n >= n_min && n <= n_max; }
};

BoundCurve loglog_curve(double alpha, double M);
BoundCurve fixed_alpha_curve(double alpha, double M);
BoundCurve semiparam_curve(double alpha, double c);

struct NecessaryConditionRow {
  int k;
  std::uint64_t n_k;
  double threshold;
  bool satisfied;
};

/// For k in [k_lo, k_hi] (a subrange of [2, 20]) compares the schedule n_k of
/// `width` with testing_lb_threshold(k, Delta_k, alpha). ScheduleExhausted
/// from compute_nk propagates.
std::vector<NecessaryConditionRow> necessary_condition_check(
    const CantorFamily& fam, const WidthFn& width, double alpha, int k_lo, int k_hi,
    std::uint64_t n_max = kDefaultScheduleLimit);

/// Overload that takes alpha from a doubling width.
std::vector<NecessaryConditionRow> necessary_condition_check(
    const CantorFamily& fam, const WidthFn& width, int k_lo, int k_hi,
    std::uint64_t n_max = kDefaultScheduleLimit);

/// `points` integers log-spaced over [n_min, n_max], deduplicated.
std::vector<std::uint64_t> log_spaced_grid(std::uint64_t n_min, std::uint64_t n_max,
                                           std::size_t points);

struct CurveRow {
  std::uint64_t n;
  double lb_loglog;
  double lb_fixed_alpha;  // NaN when alpha >= 1/4
  double upper_width;
};

/// Gaussian location model (M = 1/(2 sigma^2)) against the sub-Gaussian
/// doubling width. Rows with n < 16 carry NaN for lb_loglog.
std::vector<CurveRow> gaussian_curves(double alpha, double sigma,
                                      std::span<const std::uint64_t> grid);

/// CSV with header n,lb_loglog,lb_fixed_alpha,upper_width.
/// Empty cells stand for NaN.
void write_curves_csv(std::ostream& out, std::span<const CurveRow> rows);

struct SandwichSummary {
  std::size_t rows_checked = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t violations = 0;
  std::uint64_t first_violation = 0;
};

/// Over rows with a defined lb_loglog: counts rows where the lower bound
/// exceeds the width or upper_width / lb_loglog leaves [ratio_lo, ratio_hi].
SandwichSummary sandwich_summary(std::span<const CurveRow> rows, double ratio_lo = 1.0,
                                 double ratio_hi = 20.0);

}  // namespace anytime
