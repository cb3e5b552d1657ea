#include "anytime/median_family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "anytime/errors.hpp"

namespace anytime {

namespace {

constexpr double kHigh = 2.0;
constexpr double kLow = 2.0 / 3.0;

// The two non-zero cells of q_{v,k} on [left, left + 5^{1-k}].
std::array<DensityPiece, 2> scale_cells(int bit, double left, int k) {
  const double u = std::pow(5.0, -k);
  const double width = 5.0 * u;
  if (bit == 0) {
    return {DensityPiece{left, left + u, kHigh}, DensityPiece{left + 2.0 * u, left + width, kLow}};
  }
  return {DensityPiece{left, left + 3.0 * u, kLow}, DensityPiece{left + 4.0 * u, left + width, kHigh}};
}

}  // namespace

double median_family_center(const BitPrefix& v, int k) {
  if (k < 0) throw DomainError("depth must be non-negative");
  double a = 0.0;
  for (int j = 1; j <= k; ++j) a += (2.0 * v.bit(static_cast<std::size_t>(j)) + 1.0) * std::pow(5.0, -j);
  return a;
}

double median_family_scale_mass(const BitPrefix& v, int k) {
  if (k < 1) throw DomainError("scale index must be >= 1");
  const auto cells = scale_cells(v.bit(static_cast<std::size_t>(k)), median_family_center(v, k - 1), k);
  double mass = 0.0;
  for (const auto& c : cells) mass += c.level * (c.hi - c.lo);
  return mass;
}

MedianFamily::MedianFamily(BitPrefix v, int depth) : v_(std::move(v)), depth_(depth) {
  if (depth_ < 1 || depth_ > kMaxDepth) {
    throw DomainError("median family depth must lie in [1, " + std::to_string(kMaxDepth) + "]");
  }
  pieces_.reserve(2 * static_cast<std::size_t>(depth_) + 1);
  double left = 0.0;
  for (int k = 1; k <= depth_; ++k) {
    const int bit = v_.bit(static_cast<std::size_t>(k));
    for (const auto& c : scale_cells(bit, left, k)) pieces_.push_back(c);
    left += (2.0 * bit + 1.0) * std::pow(5.0, -k);
  }
  pieces_.push_back({left, left + std::pow(5.0, -depth_), 1.0});

  std::sort(pieces_.begin(), pieces_.end(),
            [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
  // Cells computed at different scales can disagree by an ulp at shared
  // endpoints; snap them into an exact tiling of [0, 1].
  pieces_.front().lo = 0.0;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) pieces_[i].hi = pieces_[i + 1].lo;
  pieces_.back().hi = 1.0;

  cumulative_.resize(pieces_.size() + 1);
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + pieces_[i].level * (pieces_[i].hi - pieces_[i].lo);
  }
}

double MedianFamily::density(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("median family density is defined on [0, 1]");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double value, const DensityPiece& p) { return value < p.lo; });
  return std::prev(it)->level;
}

double MedianFamily::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return cumulative_.back();
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double value, const DensityPiece& p) { return value < p.lo; });
  const auto idx = static_cast<std::size_t>(std::distance(pieces_.begin(), it)) - 1;
  return cumulative_[idx] + pieces_[idx].level * (x - pieces_[idx].lo);
}

double MedianFamily::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end() - 1, u);
  const auto idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
  const auto& p = pieces_[std::min(idx, pieces_.size() - 1)];
  const double x = p.lo + (u - cumulative_[idx]) / p.level;
  return std::clamp(x, p.lo, p.hi);
}

double MedianFamily::center() const { return median_family_center(v_, depth_); }

double median_family_density(const MedianFamily& mf, double x) { return mf.density(x); }

SamplePath median_family_sample(const MedianFamily& mf, std::size_t n, std::uint64_t seed) {
  SamplePath path;
  path.tag = FamilyTag::Median;
  path.v = mf.prefix();
  path.seed = seed;
  path.values.resize(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& x : path.values) x = mf.quantile(unit(rng));
  return path;
}

Nats median_family_kl_numeric(const BitPrefix& v, const BitPrefix& w, int depth, int k) {
  if (k < 1) throw ArgumentError("first-difference depth k must be >= 1");
  if (depth < k) throw ArgumentError("truncation depth must be at least k");
  const std::size_t shared = first_difference(v, w, static_cast<std::size_t>(k - 1));
  if (shared != 0) {
    throw ArgumentError("prefixes differ at bit " + std::to_string(shared) +
                        ", before the claimed depth " + std::to_string(k));
  }

  const MedianFamily p(v, depth);
  const MedianFamily q(w, depth);
  const auto pp = p.pieces();
  const auto qp = q.pieces();

  // Both tilings cover [0, 1]; walk their common refinement.
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  double x = 0.0;
  while (i < pp.size() && j < qp.size()) {
    const double next = std::min(pp[i].hi, qp[j].hi);
    if (next > x) sum += pp[i].level * std::log(pp[i].level / qp[j].level) * (next - x);
    x = next;
    if (pp[i].hi <= x) ++i;
    if (j < qp.size() && qp[j].hi <= x) ++j;
  }
  return Nats(std::max(0.0, sum));
}

double median_family_kl_bound(int k) { return 2.0 * std::log(3.0) * std::pow(5.0, -k); }

}  // namespace anytime
