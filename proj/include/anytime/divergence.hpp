#pragma once

// Divergences on finite supports and closed-form location / GLM models,
// together with the three two-point inequality primitives (Le Cam,
// Bretagnolle-Huber, conditional KL). Everything here is a pure function.

#include <cstddef>
#include <compare>
#include <random>
#include <span>
#include <vector>

namespace anytime {

/// A KL-divergence value in nats. Non-negative, possibly +infinity.
class Nats {
 public:
  constexpr Nats() = default;
  /// Throws DomainError for negative or NaN values.
  explicit Nats(double value);

  static Nats infinity();

  double value() const { return value_; }
  bool is_infinite() const;

  friend auto operator<=>(const Nats&, const Nats&) = default;

 private:
  double value_ = 0.0;
};

/// Set of support indices (0-based) used as a conditioning event.
class EventSet {
 public:
  /// Throws ArgumentError if empty. Duplicates are removed.
  explicit EventSet(std::vector<std::size_t> indices);

  std::span<const std::size_t> indices() const { return indices_; }
  bool contains(std::size_t i) const;
  /// Largest index + 1.
  std::size_t min_support() const { return indices_.back() + 1; }

 private:
  std::vector<std::size_t> indices_;
};

/// Probability vector on {0, ..., n-1}.
class FiniteDist {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Throws DomainError if an entry is negative/non-finite or the entries do
  /// not sum to 1 within kSumTolerance.
  explicit FiniteDist(std::vector<double> probs);

  static FiniteDist uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  /// P(S). Throws DimensionError if S reaches outside the support.
  double mass(const EventSet& s) const;

 private:
  std::vector<double> probs_;
};

/// Finitely supported covariate law for the logistic GLM.
class CovariateDist {
 public:
  CovariateDist(std::vector<double> values, FiniteDist weights);

  static CovariateDist point(double x);
  /// Uniform on {-1, +1}.
  static CovariateDist rademacher();

  std::span<const double> values() const { return values_; }
  const FiniteDist& weights() const { return weights_; }
  double second_moment() const;

 private:
  std::vector<double> values_;
  FiniteDist weights_;
};

Nats kl_finite(const FiniteDist& p, const FiniteDist& q);
double tv_finite(const FiniteDist& p, const FiniteDist& q);

/// KL(Bern(p) || Bern(q)); p, q must lie strictly inside (0, 1).
Nats kl_bernoulli(double p, double q);

/// KL between N(theta, sigma^2) and N(theta + delta, sigma^2).
Nats kl_gaussian_loc(double delta, double sigma);

/// KL between Cauchy location models at distance delta, scale sigma.
Nats kl_cauchy_loc(double delta, double sigma);
/// The quadratic upper bound delta^2 / (4 sigma^2) on kl_cauchy_loc.
double kl_cauchy_loc_upper(double delta, double sigma);

/// Log-partition A(theta | x) = log(e^{-x theta} + e^{x theta}) of the
/// logistic model with labels in {-1, +1}, and its first two derivatives.
double logistic_log_partition(double theta, double x);
double logistic_log_partition_d1(double theta, double x);
double logistic_log_partition_d2(double theta, double x);

/// E_X[A(theta'|X) - A(theta|X) - A'(theta|X)(theta' - theta)], i.e.
/// KL(P_theta || P_theta') for the logistic GLM with covariate law x_dist.
Nats kl_logistic_glm(double theta, double theta_prime, const CovariateDist& x_dist);

/// Bretagnolle-Huber upper bound on total variation: 1 - exp(-kl) / 2.
double bh_tv_upper(Nats kl);

/// Le Cam lower bound on P(S) + Q(S^c): 1 - tv. Throws DomainError if tv is
/// outside [0, 1].
double le_cam_error_lower(double tv);

struct ConditionalKl {
  Nats conditional;  // KL(P_S || Q_S)
  Nats bound;        // KL(P || Q) / P(S)
};

/// Exact KL between P and Q restricted to S and renormalised, alongside the
/// bound KL(P||Q)/P(S). Throws ConditioningError if P(S) or Q(S) is zero.
ConditionalKl kl_conditional_exact(const FiniteDist& p, const FiniteDist& q, const EventSet& s);

/// Interior fuzzing draw: normalised Exp(1) entries (a flat Dirichlet),
/// clamped below at kFuzzFloor and renormalised.
inline constexpr double kFuzzFloor = 1e-9;
FiniteDist random_interior_dist(std::size_t n, std::mt19937_64& rng);

/// Uniformly random non-empty subset of {0, ..., n-1}.
EventSet random_event(std::size_t n, std::mt19937_64& rng);

}  // namespace anytime
