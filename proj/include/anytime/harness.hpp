#pragma once

// Monte Carlo experiments. Every replication draws from its own derived seed
// and writes into its own slot, so the serial and OpenMP kernels produce
// identical reports for any thread count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anytime/divergence.hpp"
#include "anytime/estimators.hpp"
#include "anytime/families.hpp"
#include "anytime/reduction.hpp"
#include "anytime/seeding.hpp"

namespace anytime {

enum class Execution { Serial, Parallel };

enum class ExperimentKind { Coverage, TestingGame, InequalitySuite };

/// Which estimate feeds the derived bit tests in the testing game.
enum class GameEstimator { Doubling, Oracle };

std::string to_string(ExperimentKind kind);
std::string to_string(GameEstimator estimator);

struct FamilyDescriptor {
  FamilyTag kind = FamilyTag::Gaussian;
  double sigma = 1.0;
  double r = 1.0;
  double theta0 = 0.0;

  /// Throws ConfigError for the median family (not a Cantor location family)
  /// or a non-positive sigma / r.
  CantorFamily cantor() const;

  friend bool operator==(const FamilyDescriptor&, const FamilyDescriptor&) = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Coverage;
  FamilyDescriptor family;
  double alpha = 0.1;
  std::uint64_t horizon = std::uint64_t{1} << 15;
  std::uint64_t replications = 2000;
  int depth = 6;
  std::uint64_t seed = kDefaultSeed;
  std::string output;
  GameEstimator estimator = GameEstimator::Doubling;
  std::uint64_t trials = 10000;
  /// Worker cap for Execution::Parallel; 0 means all available.
  int threads = 0;

  /// Throws ConfigError unless R >= 1, N >= 4, K in [1, 12], alpha in (0, 1).
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct BinomialInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for successes / n at normal quantile z.
BinomialInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

struct CoverageReport {
  std::uint64_t replications = 0;
  std::uint64_t failures = 0;
  double coverage = 0.0;
  BinomialInterval interval;
  /// n -> number of paths whose first coverage failure happened at n.
  std::map<std::uint64_t, std::uint64_t> first_failure_histogram;
  /// Derived-test outcomes at the depths whose n_k fits in the horizon.
  TestSchedule schedule;
  CondErrLedger ledger;
  /// Covered paths whose projected prefix was wrong at some scheduled depth.
  std::uint64_t soundness_violations = 0;
  double wall_seconds = 0.0;
};

/// Doubling estimator with its sub-Gaussian width on a Gaussian Cantor family.
CoverageReport run_coverage(const ExperimentConfig& config, Execution exec = Execution::Parallel);
/// Same with an arbitrary width function.
CoverageReport run_coverage(const ExperimentConfig& config, const WidthFn& width,
                            Execution exec = Execution::Parallel);

struct TestingGameReport {
  GameEstimator estimator = GameEstimator::Doubling;
  std::uint64_t replications = 0;
  std::size_t requested_depth = 0;
  /// Set when n_k for some k <= requested_depth exceeded the limit; depths
  /// from that k on are dropped.
  std::optional<std::size_t> exhausted_at;
  TestSchedule schedule;
  CondErrLedger ledger;
  /// (1/4) exp(-Delta_k n_k / (1 - alpha)) per scheduled depth.
  std::vector<double> floors;
  double budget = 0.0;
  double total_cond_err = 0.0;
  double total_std_error = 0.0;
  double wall_seconds = 0.0;

  bool within_budget() const { return total_cond_err <= budget + 2.0 * total_std_error; }
};

/// The doubling estimator needs a Gaussian family; there the running mean at
/// each epoch is simulated exactly from Gaussian block sums, so depths with
/// n_k far beyond memory are affordable. The oracle plugs in theta(v).
TestingGameReport run_testing_game(const ExperimentConfig& config,
                                   Execution exec = Execution::Parallel,
                                   std::uint64_t n_max = kDefaultScheduleLimit);

struct InequalityOptions {
  std::size_t max_support = 8;
  double tv_tolerance = 1e-12;
  double kl_cond_tolerance = 1e-9;
  double cantor_tolerance = 1e-12;
  int max_cantor_depth = 12;
  /// Upper bound on tv used by the Bretagnolle-Huber check; replaceable so a
  /// mutated bound can be shown to be caught.
  std::function<double(Nats)> bh_upper = bh_tv_upper;
};

struct CheckResult {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  /// Largest amount by which the checked inequality was exceeded (<= 0 when
  /// it always held).
  double worst_excess = 0.0;
  /// Lowest-index violating trial as a JSON object, empty if none.
  std::string witness;
};

struct InequalitySummary {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  std::uint64_t total_violations() const;
  bool passed() const { return total_violations() == 0; }
  const CheckResult& check(const std::string& name) const;
};

/// Runs le_cam, bretagnolle_huber, conditional_kl, cantor_separation and
/// cantor_closeness for `trials` trials each. Throws ArgumentError if
/// trials == 0.
InequalitySummary run_inequality_suite(std::uint64_t trials, std::uint64_t seed,
                                       const InequalityOptions& options = {},
                                       Execution exec = Execution::Parallel, int threads = 0);

/// omp_get_max_threads(), or 1 without OpenMP.
int available_threads();

}  // namespace anytime
