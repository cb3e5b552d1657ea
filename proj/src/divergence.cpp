#include "anytime/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "anytime/errors.hpp"

namespace anytime {

namespace {

void require_same_support(const FiniteDist& p, const FiniteDist& q) {
  if (p.size() != q.size()) {
    throw DimensionError("support sizes differ: " + std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
  }
}

void require_positive_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be positive and finite");
  }
}

// p log(p/q) with 0 log(0/q) = 0 and p log(p/0) = +inf.
double kl_term(double p, double q) {
  if (p == 0.0) return 0.0;
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  return p * std::log(p / q);
}

}  // namespace

Nats::Nats(double value) : value_(value) {
  if (std::isnan(value) || value < 0.0) {
    throw DomainError("KL divergence must be non-negative");
  }
}

Nats Nats::infinity() { return Nats(std::numeric_limits<double>::infinity()); }

bool Nats::is_infinite() const { return std::isinf(value_); }

EventSet::EventSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw ArgumentError("event set must be non-empty");
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

bool EventSet::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

FiniteDist::FiniteDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw DomainError("distribution needs a non-empty support");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DomainError("probabilities must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw DomainError("probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

FiniteDist FiniteDist::uniform(std::size_t n) {
  if (n == 0) throw DomainError("uniform distribution needs n >= 1");
  return FiniteDist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double FiniteDist::mass(const EventSet& s) const {
  if (s.min_support() > size()) throw DimensionError("event reaches outside the support");
  double m = 0.0;
  for (std::size_t i : s.indices()) m += probs_[i];
  return m;
}

CovariateDist::CovariateDist(std::vector<double> values, FiniteDist weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.size() != weights_.size()) {
    throw DimensionError("covariate values and weights differ in length");
  }
  for (double x : values_) {
    if (!std::isfinite(x)) throw DomainError("covariate values must be finite");
  }
}

CovariateDist CovariateDist::point(double x) { return CovariateDist({x}, FiniteDist({1.0})); }

CovariateDist CovariateDist::rademacher() {
  return CovariateDist({-1.0, 1.0}, FiniteDist({0.5, 0.5}));
}

double CovariateDist::second_moment() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m += weights_[i] * values_[i] * values_[i];
  return m;
}

Nats kl_finite(const FiniteDist& p, const FiniteDist& q) {
  require_same_support(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double term = kl_term(p[i], q[i]);
    if (std::isinf(term)) return Nats::infinity();
    sum += term;
  }
  // Gibbs' inequality holds exactly; rounding can leave a tiny negative.
  return Nats(std::max(0.0, sum));
}

double tv_finite(const FiniteDist& p, const FiniteDist& q) {
  require_same_support(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return std::min(1.0, 0.5 * sum);
}

Nats kl_bernoulli(double p, double q) {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) {
    throw DomainError("Bernoulli parameters must lie strictly inside (0, 1)");
  }
  return Nats(std::max(0.0, p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q))));
}

Nats kl_gaussian_loc(double delta, double sigma) {
  require_positive_sigma(sigma);
  return Nats(delta * delta / (2.0 * sigma * sigma));
}

Nats kl_cauchy_loc(double delta, double sigma) {
  require_positive_sigma(sigma);
  return Nats(std::log1p(delta * delta / (4.0 * sigma * sigma)));
}

double kl_cauchy_loc_upper(double delta, double sigma) {
  require_positive_sigma(sigma);
  return delta * delta / (4.0 * sigma * sigma);
}

double logistic_log_partition(double theta, double x) {
  const double a = std::abs(x * theta);
  return a + std::log1p(std::exp(-2.0 * a));
}

double logistic_log_partition_d1(double theta, double x) { return x * std::tanh(x * theta); }

double logistic_log_partition_d2(double theta, double x) {
  const double th = std::tanh(x * theta);
  return x * x * (1.0 - th * th);
}

Nats kl_logistic_glm(double theta, double theta_prime, const CovariateDist& x_dist) {
  const auto xs = x_dist.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double bregman = logistic_log_partition(theta_prime, x) -
                           logistic_log_partition(theta, x) -
                           logistic_log_partition_d1(theta, x) * (theta_prime - theta);
    sum += x_dist.weights()[i] * bregman;
  }
  // A(. | x) is convex so the Bregman gap is >= 0 up to rounding.
  return Nats(std::max(0.0, sum));
}

double bh_tv_upper(Nats kl) {
  if (kl.is_infinite()) return 1.0;
  return 1.0 - 0.5 * std::exp(-kl.value());
}

double le_cam_error_lower(double tv) {
  if (!(tv >= 0.0 && tv <= 1.0)) throw DomainError("total variation must lie in [0, 1]");
  return 1.0 - tv;
}

ConditionalKl kl_conditional_exact(const FiniteDist& p, const FiniteDist& q, const EventSet& s) {
  require_same_support(p, q);
  const double ps = p.mass(s);
  const double qs = q.mass(s);
  if (ps <= 0.0 || qs <= 0.0) {
    throw ConditioningError("conditioning event has zero probability");
  }

  double cond = 0.0;
  bool infinite = false;
  for (std::size_t i : s.indices()) {
    const double term = kl_term(p[i] / ps, q[i] / qs);
    if (std::isinf(term)) {
      infinite = true;
      break;
    }
    cond += term;
  }

  const Nats full = kl_finite(p, q);
  const Nats bound = full.is_infinite() ? Nats::infinity() : Nats(full.value() / ps);
  return {infinite ? Nats::infinity() : Nats(std::max(0.0, cond)), bound};
}

FiniteDist random_interior_dist(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw DomainError("distribution needs n >= 1");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  for (double& x : w) x = expo(rng);
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x = std::max(x / total, kFuzzFloor);
  total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  // Renormalisation can leave the sum a few ulps off; fold it into the
  // largest entry so the FiniteDist invariant holds comfortably.
  const double drift = 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
  *std::max_element(w.begin(), w.end()) += drift;
  return FiniteDist(std::move(w));
}

EventSet random_event(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw DomainError("event needs a non-empty support");
  std::bernoulli_distribution coin(0.5);
  for (;;) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng)) idx.push_back(i);
    }
    if (!idx.empty()) return EventSet(std::move(idx));
  }
}

}  // namespace anytime
