#include "anytime/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Cholesky>

#include "anytime/errors.hpp"

namespace anytime {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

double loglog_rate(double n) { return std::sqrt(std::log(std::log(n)) / n); }

}  // namespace

double lb_loglog(double n, double alpha, double M) {
  if (!(n >= 16.0)) throw DomainError("lb_loglog needs n >= 16");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  require_positive(M, "M");
  return std::sqrt((1.0 - alpha) / (8.0 * M)) * loglog_rate(n);
}

double lb_fixed_alpha(double n, double alpha, double M) {
  if (!(alpha > 0.0 && alpha < 0.25)) throw DomainError("lb_fixed_alpha needs alpha in (0, 1/4)");
  if (!(n >= 1.0)) throw DomainError("lb_fixed_alpha needs n >= 1");
  require_positive(M, "M");
  return 0.5 * std::sqrt(std::log(1.0 / (4.0 * alpha)) / (M * n));
}

double two_point_error_lb(double n, double M, double delta) {
  if (!(n >= 0.0)) throw DomainError("sample size must be non-negative");
  require_positive(M, "M");
  if (!(delta >= 0.0)) throw DomainError("delta must be non-negative");
  return 0.25 * std::exp(-n * M * delta * delta);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gaussian_two_point_error(double n, double delta, double sigma) {
  require_positive(sigma, "sigma");
  return 2.0 * normal_cdf(-std::sqrt(n) * delta / (2.0 * sigma));
}

double testing_lb_threshold(int k, Nats Delta_k, double alpha) {
  if (k < 2) throw DomainError("testing threshold needs k >= 2");
  if (!(Delta_k.value() > 0.0)) throw DomainError("Delta_k must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  return (1.0 - alpha) * std::log(static_cast<double>(k)) / Delta_k.value();
}

double indiv_cond_err_lb(Nats Delta_k, double n_k, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in [0, 1)");
  if (!(n_k >= 0.0)) throw DomainError("n_k must be non-negative");
  return 0.25 * std::exp(-Delta_k.value() * n_k / (1.0 - alpha));
}

double semiparam_constant(const Eigen::VectorXd& grad_phi, const Eigen::MatrixXd& fisher) {
  constexpr Eigen::Index kMaxDim = 64;
  if (fisher.rows() != fisher.cols()) throw DimensionError("Fisher matrix must be square");
  if (fisher.rows() != grad_phi.size()) throw DimensionError("gradient and Fisher matrix differ in size");
  if (fisher.rows() == 0 || fisher.rows() > kMaxDim) {
    throw DimensionError("dimension must lie in [1, 64]");
  }
  const double scale = std::max(1.0, fisher.cwiseAbs().maxCoeff());
  if ((fisher - fisher.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DecompositionError("Fisher matrix is not symmetric");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(fisher);
  if (llt.info() != Eigen::Success) {
    throw DecompositionError("Fisher matrix is not positive definite");
  }
  return std::max(0.0, grad_phi.dot(llt.solve(grad_phi)));
}

double semiparam_lower_bound(double n, double alpha, double c) {
  if (!(n >= 16.0)) throw DomainError("semiparametric bound needs n >= 16");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (!(c >= 0.0)) throw DomainError("influence second moment must be non-negative");
  return 0.25 * std::sqrt((1.0 - alpha) * c) * loglog_rate(n);
}

BoundCurve loglog_curve(double alpha, double M) {
  return {"lb_loglog", [alpha, M](double n) { return lb_loglog(n, alpha, M); }, 16.0,
          std::numeric_limits<double>::infinity()};
}

BoundCurve fixed_alpha_curve(double alpha, double M) {
  return {"lb_fixed_alpha", [alpha, M](double n) { return lb_fixed_alpha(n, alpha, M); }, 1.0,
          std::numeric_limits<double>::infinity()};
}

BoundCurve semiparam_curve(double alpha, double c) {
  return {"lb_semiparam", [alpha, c](double n) { return semiparam_lower_bound(n, alpha, c); },
          16.0, std::numeric_limits<double>::infinity()};
}

std::vector<NecessaryConditionRow> necessary_condition_check(const CantorFamily& fam,
                                                             const WidthFn& width, double alpha,
                                                             int k_lo, int k_hi,
                                                             std::uint64_t n_max) {
  if (k_lo < 2 || k_hi > 20 || k_lo > k_hi) throw DomainError("k range must lie within [2, 20]");
  std::vector<NecessaryConditionRow> rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    const std::uint64_t n_k = compute_nk(width, separation_delta(k, fam), n_max);
    const double threshold = testing_lb_threshold(k, closeness_Delta(k, fam), alpha);
    rows.push_back({k, n_k, threshold, static_cast<double>(n_k) > threshold});
  }
  return rows;
}

std::vector<NecessaryConditionRow> necessary_condition_check(const CantorFamily& fam,
                                                             const WidthFn& width, int k_lo,
                                                             int k_hi, std::uint64_t n_max) {
  if (!width.alpha()) throw ArgumentError("width function carries no alpha; pass it explicitly");
  return necessary_condition_check(fam, width, *width.alpha(), k_lo, k_hi, n_max);
}

std::vector<std::uint64_t> log_spaced_grid(std::uint64_t n_min, std::uint64_t n_max,
                                           std::size_t points) {
  if (n_min < 1 || n_max < n_min) throw DomainError("grid needs 1 <= n_min <= n_max");
  if (points == 0) throw DomainError("grid needs at least one point");
  std::vector<std::uint64_t> grid;
  grid.reserve(points);
  if (points == 1) return {n_min};
  const double lo = std::log(static_cast<double>(n_min));
  const double hi = std::log(static_cast<double>(n_max));
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    auto n = static_cast<std::uint64_t>(std::llround(std::exp(lo + t * (hi - lo))));
    grid.push_back(std::clamp(n, n_min, n_max));
  }
  grid.front() = n_min;
  grid.back() = n_max;
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<CurveRow> gaussian_curves(double alpha, double sigma,
                                      std::span<const std::uint64_t> grid) {
  require_positive(sigma, "sigma");
  const double M = 1.0 / (2.0 * sigma * sigma);
  const auto bound = DeviationBound::sub_gaussian(sigma);
  std::vector<CurveRow> rows;
  rows.reserve(grid.size());
  for (std::uint64_t n : grid) {
    const double nd = static_cast<double>(n);
    rows.push_back({n, nd >= 16.0 ? lb_loglog(nd, alpha, M) : kNaN,
                    alpha < 0.25 ? lb_fixed_alpha(nd, alpha, M) : kNaN,
                    doubling_width(alpha, bound, n)});
  }
  return rows;
}

void write_curves_csv(std::ostream& out, std::span<const CurveRow> rows) {
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << "n,lb_loglog,lb_fixed_alpha,upper_width\n" << std::setprecision(12);
  const auto cell = [&out](double x) {
    if (!std::isnan(x)) out << x;
  };
  for (const auto& row : rows) {
    out << row.n << ',';
    cell(row.lb_loglog);
    out << ',';
    cell(row.lb_fixed_alpha);
    out << ',';
    cell(row.upper_width);
    out << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

SandwichSummary sandwich_summary(std::span<const CurveRow> rows, double ratio_lo,
                                 double ratio_hi) {
  SandwichSummary s;
  for (const auto& row : rows) {
    if (std::isnan(row.lb_loglog)) continue;
    const double ratio = row.upper_width / row.lb_loglog;
    if (s.rows_checked == 0) {
      s.min_ratio = s.max_ratio = ratio;
    } else {
      s.min_ratio = std::min(s.min_ratio, ratio);
      s.max_ratio = std::max(s.max_ratio, ratio);
    }
    ++s.rows_checked;
    if (!(row.lb_loglog <= row.upper_width) || !(ratio >= ratio_lo && ratio <= ratio_hi)) {
      if (s.violations == 0) s.first_violation = row.n;
      ++s.violations;
    }
  }
  return s;
}

}  // namespace anytime
