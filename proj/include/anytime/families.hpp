#pragma once

// Cantor-indexed hard instances. A bit sequence v in {0,1}^inf is stored as
// a finite prefix plus a tail convention, and mapped to the parameter
//   theta(v) = theta0 + 2 r sum_i v_i 3^{-i}.
// Prefixes first differing at depth k then have parameters at least
// 3^{-k} r apart, while prefixes agreeing through depth k are within
// 3^{-k} r, so base models with KL <= M (theta - theta')^2 are
// M 9^{-k} r^2 close.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "anytime/divergence.hpp"

namespace anytime {

enum class Tail { AllZeros, AllOnes };

class BitPrefix {
 public:
  BitPrefix() = default;
  /// Throws ArgumentError if any entry is not 0 or 1.
  explicit BitPrefix(std::vector<std::uint8_t> bits, Tail tail = Tail::AllZeros);

  static BitPrefix zeros(std::size_t n) { return BitPrefix(std::vector<std::uint8_t>(n, 0)); }
  static BitPrefix ones(std::size_t n) {
    return BitPrefix(std::vector<std::uint8_t>(n, 1), Tail::AllOnes);
  }
  /// Parses "0110"; the tail defaults to zeros.
  static BitPrefix parse(const std::string& text, Tail tail = Tail::AllZeros);

  std::size_t size() const { return bits_.size(); }
  Tail tail() const { return tail_; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  /// 1-based bit; positions past the stored prefix follow the tail.
  int bit(std::size_t i) const;

  /// First k bits (extending with the tail if needed), same tail convention.
  BitPrefix prefix(std::size_t k) const;
  /// Stored bits followed by `b`.
  BitPrefix append(int b) const;

  std::string to_string() const;

  friend bool operator==(const BitPrefix&, const BitPrefix&) = default;

 private:
  std::vector<std::uint8_t> bits_;
  Tail tail_ = Tail::AllZeros;
};

/// 1-based index of the first differing bit within the first `depth` bits,
/// or 0 if they agree through `depth`.
std::size_t first_difference(const BitPrefix& a, const BitPrefix& b, std::size_t depth);

/// Uniform prefix of length k (the uniform law on {0,1}^inf restricted to k bits).
BitPrefix random_prefix(std::size_t k, std::mt19937_64& rng);

struct GaussianLoc {
  double sigma = 1.0;
};
struct CauchyLoc {
  double sigma = 1.0;
};
struct LogisticGlm {
  CovariateDist covariates = CovariateDist::rademacher();
};
using BaseModel = std::variant<GaussianLoc, CauchyLoc, LogisticGlm>;

enum class FamilyTag { Gaussian, Cauchy, Logistic, Median };

std::string to_string(FamilyTag tag);
FamilyTag family_tag(const BaseModel& base);

/// Quadratic KL constant M with KL(P_theta || P_theta') <= M (theta - theta')^2:
/// 1/(2 sigma^2) Gaussian, 1/(4 sigma^2) Cauchy, E[X^2] logistic.
double quadratic_kl_constant(const BaseModel& base);

/// Exact KL(P_theta || P_theta') under the base model.
Nats base_divergence(const BaseModel& base, double theta, double theta_prime);

class CantorFamily {
 public:
  static constexpr double kConstantTolerance = 1e-12;

  /// M is derived from the base model.
  CantorFamily(double theta0, double r, BaseModel base);
  /// Throws DomainError unless M matches the base model within 1e-12.
  CantorFamily(double theta0, double r, BaseModel base, double M);

  static CantorFamily gaussian(double theta0, double r, double sigma);
  static CantorFamily cauchy(double theta0, double r, double sigma);
  static CantorFamily logistic(double theta0, double r,
                               CovariateDist covariates = CovariateDist::rademacher());

  double theta0() const { return theta0_; }
  double r() const { return r_; }
  double M() const { return M_; }
  const BaseModel& base() const { return base_; }
  FamilyTag tag() const { return family_tag(base_); }

 private:
  double theta0_;
  double r_;
  BaseModel base_;
  double M_;
};

double cantor_theta(const BitPrefix& v, const CantorFamily& fam);

/// delta_k = 3^{-k} r.
double separation_delta(int k, const CantorFamily& fam);
/// Delta_k = M 9^{-k} r^2.
Nats closeness_Delta(int k, const CantorFamily& fam);

/// i.i.d. observations. For location families `values` holds X_i; for the
/// logistic GLM `covariates` holds X_i and `values` the labels Y_i in {-1,1}.
struct SamplePath {
  FamilyTag tag = FamilyTag::Gaussian;
  BitPrefix v;
  std::uint64_t seed = 0;
  std::vector<double> values;
  std::vector<double> covariates;

  std::size_t size() const { return values.size(); }
};

/// Streaming sampler for P_{theta(v)}; owns its generator, so (family, v,
/// seed) fixes every draw. `sample_path` is the batch form.
class PathSampler {
 public:
  PathSampler(const CantorFamily& fam, const BitPrefix& v, std::uint64_t seed);

  double theta() const { return theta_; }
  /// Next observation; for the GLM writes the covariate to *x.
  double draw(double* x = nullptr);

 private:
  BaseModel base_;
  double theta_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

SamplePath sample_path(const CantorFamily& fam, const BitPrefix& v, std::size_t n,
                       std::uint64_t seed);

}  // namespace anytime
