#pragma once

// Nonparametric hard instances for median estimation on [0, 1].
//
// Scale k acts on the interval [a_{v,k-1}, a_{v,k-1} + 5^{1-k}] with a
// rescaled copy of the step function
//   q(u) = 2 on [0, 0.2),  0 on [0.2, 0.4),  2/3 on [0.4, 1]
// (mirrored when v_k = 1), leaving a hole [a_{v,k}, a_{v,k} + 5^{-k}) that
// the next scale fills, where a_{v,k} = sum_{j<=k} (2 v_j + 1) 5^{-j}.
// Each scale carries mass 4 * 5^{-k}. Truncating at depth K spreads the
// remaining 5^{-K} uniformly (density 1) over the last hole.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "anytime/divergence.hpp"
#include "anytime/families.hpp"

namespace anytime {

/// Constant-density cell [lo, hi).
struct DensityPiece {
  double lo;
  double hi;
  double level;
};

class MedianFamily {
 public:
  /// Throws DomainError for depth < 1 or depth > kMaxDepth.
  MedianFamily(BitPrefix v, int depth);

  static constexpr int kMaxDepth = 20;

  const BitPrefix& prefix() const { return v_; }
  int depth() const { return depth_; }

  /// Sorted cells tiling [0, 1].
  std::span<const DensityPiece> pieces() const { return pieces_; }

  double density(double x) const;
  double cdf(double x) const;
  /// Inverse CDF for u in [0, 1].
  double quantile(double u) const;
  /// a_{v,K}.
  double center() const;
  /// Exact median of the truncated density (= a_{v,K} + 5^{-K} / 2).
  double median() const { return quantile(0.5); }

 private:
  BitPrefix v_;
  int depth_;
  std::vector<DensityPiece> pieces_;
  std::vector<double> cumulative_;  // CDF at each piece's lo, plus 1 at the end
};

/// Density of the truncated law at x in [0, 1]; DomainError otherwise.
double median_family_density(const MedianFamily& mf, double x);

/// a_{v,k} = sum_{j<=k} (2 v_j + 1) 5^{-j}.
double median_family_center(const BitPrefix& v, int k);

/// Mass carried by scale k alone: integral of q_{v,k} over [0, 1].
double median_family_scale_mass(const BitPrefix& v, int k);

/// n i.i.d. draws by inverse-CDF sampling.
SamplePath median_family_sample(const MedianFamily& mf, std::size_t n, std::uint64_t seed);

/// Exact KL between the depth-K truncations indexed by v and w, as a sum over
/// the common refinement of their cells. `k` is the depth at which they may
/// first differ: v and w must agree on the first k - 1 bits (ArgumentError
/// otherwise) and depth >= k.
Nats median_family_kl_numeric(const BitPrefix& v, const BitPrefix& w, int depth, int k);

/// 2 log 3 * 5^{-k}.
double median_family_kl_bound(int k);

}  // namespace anytime
