#include "anytime/families.hpp"

#include <cmath>
#include <numbers>

#include "anytime/errors.hpp"

namespace anytime {

BitPrefix::BitPrefix(std::vector<std::uint8_t> bits, Tail tail)
    : bits_(std::move(bits)), tail_(tail) {
  for (auto b : bits_) {
    if (b > 1) throw ArgumentError("bit prefix entries must be 0 or 1");
  }
}

BitPrefix BitPrefix::parse(const std::string& text, Tail tail) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw ArgumentError("bit string may only contain 0 and 1");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitPrefix(std::move(bits), tail);
}

int BitPrefix::bit(std::size_t i) const {
  if (i == 0) throw ArgumentError("bit positions are 1-based");
  if (i <= bits_.size()) return bits_[i - 1];
  return tail_ == Tail::AllOnes ? 1 : 0;
}

BitPrefix BitPrefix::prefix(std::size_t k) const {
  std::vector<std::uint8_t> out(k);
  for (std::size_t i = 1; i <= k; ++i) out[i - 1] = static_cast<std::uint8_t>(bit(i));
  return BitPrefix(std::move(out), tail_);
}

BitPrefix BitPrefix::append(int b) const {
  auto out = bits_;
  out.push_back(static_cast<std::uint8_t>(b));
  return BitPrefix(std::move(out), tail_);
}

std::string BitPrefix::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

std::size_t first_difference(const BitPrefix& a, const BitPrefix& b, std::size_t depth) {
  for (std::size_t i = 1; i <= depth; ++i) {
    if (a.bit(i) != b.bit(i)) return i;
  }
  return 0;
}

BitPrefix random_prefix(std::size_t k, std::mt19937_64& rng) {
  std::vector<std::uint8_t> bits(k);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
  }
  return BitPrefix(std::move(bits));
}

std::string to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Gaussian: return "gaussian";
    case FamilyTag::Cauchy: return "cauchy";
    case FamilyTag::Logistic: return "logistic";
    case FamilyTag::Median: return "median";
  }
  return "unknown";
}

FamilyTag family_tag(const BaseModel& base) {
  switch (base.index()) {
    case 0: return FamilyTag::Gaussian;
    case 1: return FamilyTag::Cauchy;
    default: return FamilyTag::Logistic;
  }
}

namespace {

struct QuadraticConstant {
  double operator()(const GaussianLoc& g) const { return 1.0 / (2.0 * g.sigma * g.sigma); }
  double operator()(const CauchyLoc& c) const { return 1.0 / (4.0 * c.sigma * c.sigma); }
  double operator()(const LogisticGlm& l) const { return l.covariates.second_moment(); }
};

void validate_base(const BaseModel& base) {
  if (const auto* g = std::get_if<GaussianLoc>(&base); g && !(g->sigma > 0.0)) {
    throw DomainError("Gaussian sigma must be positive");
  }
  if (const auto* c = std::get_if<CauchyLoc>(&base); c && !(c->sigma > 0.0)) {
    throw DomainError("Cauchy sigma must be positive");
  }
}

}  // namespace

double quadratic_kl_constant(const BaseModel& base) {
  validate_base(base);
  return std::visit(QuadraticConstant{}, base);
}

Nats base_divergence(const BaseModel& base, double theta, double theta_prime) {
  if (const auto* g = std::get_if<GaussianLoc>(&base)) {
    return kl_gaussian_loc(theta_prime - theta, g->sigma);
  }
  if (const auto* c = std::get_if<CauchyLoc>(&base)) {
    return kl_cauchy_loc(theta_prime - theta, c->sigma);
  }
  return kl_logistic_glm(theta, theta_prime, std::get<LogisticGlm>(base).covariates);
}

CantorFamily::CantorFamily(double theta0, double r, BaseModel base)
    : theta0_(theta0), r_(r), base_(std::move(base)), M_(quadratic_kl_constant(base_)) {
  if (!(r_ > 0.0) || !std::isfinite(r_)) throw DomainError("radius r must be positive");
  if (!std::isfinite(theta0_)) throw DomainError("theta0 must be finite");
  if (!(M_ > 0.0)) throw DomainError("quadratic KL constant M must be positive");
}

CantorFamily::CantorFamily(double theta0, double r, BaseModel base, double M)
    : CantorFamily(theta0, r, std::move(base)) {
  if (std::abs(M - M_) > kConstantTolerance) {
    throw DomainError("M is inconsistent with the base model");
  }
}

CantorFamily CantorFamily::gaussian(double theta0, double r, double sigma) {
  return CantorFamily(theta0, r, GaussianLoc{sigma});
}

CantorFamily CantorFamily::cauchy(double theta0, double r, double sigma) {
  return CantorFamily(theta0, r, CauchyLoc{sigma});
}

CantorFamily CantorFamily::logistic(double theta0, double r, CovariateDist covariates) {
  return CantorFamily(theta0, r, LogisticGlm{std::move(covariates)});
}

double cantor_theta(const BitPrefix& v, const CantorFamily& fam) {
  // Horner from the deepest stored digit. `scaled` is 2 sum_{j>i} v_j 3^{i-j},
  // which is 1 for an all-ones tail and 0 for an all-zeros tail.
  double scaled = v.tail() == Tail::AllOnes ? 1.0 : 0.0;
  const auto bits = v.bits();
  for (std::size_t i = bits.size(); i-- > 0;) {
    scaled = (2.0 * bits[i] + scaled) / 3.0;
  }
  return fam.theta0() + fam.r() * scaled;
}

double separation_delta(int k, const CantorFamily& fam) {
  if (k < 1) throw DomainError("depth k must be >= 1");
  return std::pow(3.0, -k) * fam.r();
}

Nats closeness_Delta(int k, const CantorFamily& fam) {
  if (k < 1) throw DomainError("depth k must be >= 1");
  return Nats(fam.M() * std::pow(9.0, -k) * fam.r() * fam.r());
}

PathSampler::PathSampler(const CantorFamily& fam, const BitPrefix& v, std::uint64_t seed)
    : base_(fam.base()), theta_(cantor_theta(v, fam)), rng_(seed) {}

double PathSampler::draw(double* x) {
  if (const auto* g = std::get_if<GaussianLoc>(&base_)) {
    return theta_ + g->sigma * normal_(rng_);
  }
  if (const auto* c = std::get_if<CauchyLoc>(&base_)) {
    return theta_ + c->sigma * std::tan(std::numbers::pi * (unit_(rng_) - 0.5));
  }
  const auto& cov = std::get<LogisticGlm>(base_).covariates;
  const auto xs = cov.values();
  const auto ws = cov.weights().probs();
  double u = unit_(rng_);
  std::size_t idx = 0;
  while (idx + 1 < xs.size() && u >= ws[idx]) {
    u -= ws[idx];
    ++idx;
  }
  const double xi = xs[idx];
  if (x != nullptr) *x = xi;
  // P(Y = 1 | X) = e^{X theta} / (e^{X theta} + e^{-X theta})
  const double p_one = 1.0 / (1.0 + std::exp(-2.0 * xi * theta_));
  return unit_(rng_) < p_one ? 1.0 : -1.0;
}

SamplePath sample_path(const CantorFamily& fam, const BitPrefix& v, std::size_t n,
                       std::uint64_t seed) {
  if (n < 1) throw DomainError("sample path needs n >= 1");
  SamplePath path;
  path.tag = fam.tag();
  path.v = v;
  path.seed = seed;
  path.values.resize(n);
  const bool glm = path.tag == FamilyTag::Logistic;
  if (glm) path.covariates.resize(n);

  PathSampler sampler(fam, v, seed);
  for (std::size_t i = 0; i < n; ++i) {
    path.values[i] = sampler.draw(glm ? &path.covariates[i] : nullptr);
  }
  return path;
}

}  // namespace anytime
