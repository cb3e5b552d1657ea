#include "anytime/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <random>

#include <json.hpp>

#include "anytime/bounds.hpp"
#include "anytime/errors.hpp"

namespace anytime {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Coverage:
      return "coverage";
    case ExperimentKind::TestingGame:
      return "testgame";
    case ExperimentKind::InequalitySuite:
      return "klcheck";
  }
  return "unknown";
}

std::string to_string(GameEstimator estimator) {
  return estimator == GameEstimator::Oracle ? "oracle" : "doubling";
}

CantorFamily FamilyDescriptor::cantor() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("r must be positive");
  if (!std::isfinite(theta0)) throw ConfigError("theta0 must be finite");
  switch (kind) {
    case FamilyTag::Gaussian:
      return CantorFamily::gaussian(theta0, r, sigma);
    case FamilyTag::Cauchy:
      return CantorFamily::cauchy(theta0, r, sigma);
    case FamilyTag::Logistic:
      return CantorFamily::logistic(theta0, r);
    case FamilyTag::Median:
      break;
  }
  throw ConfigError("the median family has no Cantor location parametrisation");
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (horizon < 4) throw ConfigError("horizon must be >= 4");
  if (depth < 1 || depth > 12) throw ConfigError("depth must lie in [1, 12]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

BinomialInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  BinomialInterval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  out.lo = std::min(out.lo, p);
  out.hi = std::max(out.hi, p);
  return out;
}

int available_threads() { return omp_get_max_threads(); }

namespace {

int resolve_threads(int requested) {
  return requested > 0 ? requested : available_threads();
}

// Runs body(i) for i in [0, count), serially or over an OpenMP team.
template <class Body>
void for_each_index(std::uint64_t count, Execution exec, int threads, Body&& body) {
  if (exec == Execution::Serial) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve_threads(threads))
  for (std::int64_t i = 0; i < n; ++i) body(static_cast<std::uint64_t>(i));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct CoverageOutcome {
  std::optional<std::uint64_t> first_failure;
  BitPrefix v;
  BitPrefix vhat;
  bool sound = true;
};

CoverageOutcome coverage_replication(const ExperimentConfig& config, const CantorFamily& fam,
                                     const std::vector<double>& widths,
                                     const TestSchedule& schedule, std::uint64_t rep) {
  std::mt19937_64 prefix_rng(derive_seed(config.seed, rep, "prefix"));
  CoverageOutcome out;
  out.v = random_prefix(static_cast<std::size_t>(config.depth), prefix_rng);
  PathSampler sampler(fam, out.v, derive_seed(config.seed, rep, "path"));
  const double theta = sampler.theta();

  std::vector<std::uint8_t> bits;
  bits.reserve(schedule.size());
  std::vector<double> at_nk;
  at_nk.reserve(schedule.size());
  EstimatorState state;
  std::size_t next_k = 1;
  for (std::uint64_t n = 1; n <= config.horizon; ++n) {
    state.update(sampler.draw());
    const double est = state.estimate();
    if (!out.first_failure && !(std::abs(est - theta) <= widths[n - 1])) out.first_failure = n;
    while (next_k <= schedule.size() && schedule.at(next_k) == n) {
      bits.push_back(static_cast<std::uint8_t>(derived_test_bit(est, fam, next_k)));
      at_nk.push_back(est);
      ++next_k;
    }
  }
  out.vhat = BitPrefix(std::move(bits));
  if (!out.first_failure) {
    for (std::size_t k = 1; k <= at_nk.size(); ++k) {
      if (first_difference(project_vhat(at_nk[k - 1], fam, k), out.v, k) != 0) {
        out.sound = false;
        break;
      }
    }
  }
  return out;
}

}  // namespace

CoverageReport run_coverage(const ExperimentConfig& config, Execution exec) {
  config.validate();
  const CantorFamily fam = config.family.cantor();
  if (fam.tag() != FamilyTag::Gaussian) {
    throw ConfigError("the doubling width is calibrated for the Gaussian family only");
  }
  return run_coverage(config,
                      WidthFn::doubling(config.alpha, DeviationBound::sub_gaussian(config.family.sigma)),
                      exec);
}

CoverageReport run_coverage(const ExperimentConfig& config, const WidthFn& width, Execution exec) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const CantorFamily fam = config.family.cantor();
  const std::vector<double> widths = width.tabulate(config.horizon);
  const TestSchedule schedule =
      compute_schedule(width, fam, static_cast<std::size_t>(config.depth), config.horizon);

  std::vector<CoverageOutcome> outcomes(config.replications);
  for_each_index(config.replications, exec, config.threads, [&](std::uint64_t rep) {
    outcomes[rep] = coverage_replication(config, fam, widths, schedule, rep);
  });

  CoverageReport report;
  report.replications = config.replications;
  report.schedule = schedule;
  report.ledger = CondErrLedger(schedule.size());
  for (const auto& o : outcomes) {
    if (o.first_failure) {
      ++report.failures;
      ++report.first_failure_histogram[*o.first_failure];
    } else if (!o.sound) {
      ++report.soundness_violations;
    }
    if (schedule.size() > 0) report.ledger.record(o.v, o.vhat);
  }
  const std::uint64_t covered = report.replications - report.failures;
  report.coverage = static_cast<double>(covered) / static_cast<double>(report.replications);
  report.interval = wilson_interval(covered, report.replications);
  report.wall_seconds = seconds_since(start);
  return report;
}

TestingGameReport run_testing_game(const ExperimentConfig& config, Execution exec,
                                   std::uint64_t n_max) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const CantorFamily fam = config.family.cantor();
  if (config.estimator == GameEstimator::Doubling && fam.tag() != FamilyTag::Gaussian) {
    throw ConfigError("the doubling testing game is implemented for the Gaussian family only");
  }
  const auto depth = static_cast<std::size_t>(config.depth);
  const WidthFn width =
      WidthFn::doubling(config.alpha, DeviationBound::sub_gaussian(config.family.sigma));

  TestingGameReport report;
  report.estimator = config.estimator;
  report.replications = config.replications;
  report.requested_depth = depth;
  report.schedule = compute_schedule(width, fam, depth, n_max);
  const std::size_t levels = report.schedule.size();
  if (levels < depth) report.exhausted_at = levels + 1;
  report.budget = cond_err_budget(config.alpha);
  for (std::size_t k = 1; k <= levels; ++k) {
    report.floors.push_back(indiv_cond_err_lb(closeness_Delta(static_cast<int>(k), fam),
                                              static_cast<double>(report.schedule.at(k)),
                                              config.alpha));
  }

  std::vector<std::uint64_t> epochs;
  for (auto n : report.schedule.counts()) epochs.push_back(std::bit_floor(n));

  const double sigma = config.family.sigma;
  std::vector<std::pair<BitPrefix, BitPrefix>> outcomes(config.replications);
  for_each_index(config.replications, exec, config.threads, [&](std::uint64_t rep) {
    std::mt19937_64 prefix_rng(derive_seed(config.seed, rep, "prefix"));
    BitPrefix v = random_prefix(depth, prefix_rng);
    const double theta = cantor_theta(v, fam);
    std::vector<std::uint8_t> bits(levels);
    if (config.estimator == GameEstimator::Oracle) {
      for (std::size_t k = 1; k <= levels; ++k) {
        bits[k - 1] = static_cast<std::uint8_t>(derived_test_bit(theta, fam, k));
      }
    } else {
      // The epoch mean minus theta is a sum of i.i.d. N(0, sigma^2) draws
      // divided by the epoch size; accumulate it block by block.
      std::mt19937_64 path_rng(derive_seed(config.seed, rep, "path"));
      std::normal_distribution<double> normal(0.0, 1.0);
      double noise = 0.0;
      std::uint64_t m_prev = 0;
      for (std::size_t k = 1; k <= levels; ++k) {
        const std::uint64_t m = epochs[k - 1];
        if (m > m_prev) {
          noise += sigma * std::sqrt(static_cast<double>(m - m_prev)) * normal(path_rng);
          m_prev = m;
        }
        const double est = theta + noise / static_cast<double>(m);
        bits[k - 1] = static_cast<std::uint8_t>(derived_test_bit(est, fam, k));
      }
    }
    outcomes[rep] = {std::move(v), BitPrefix(std::move(bits))};
  });

  report.ledger = CondErrLedger(levels);
  if (levels > 0) {
    for (const auto& [v, vhat] : outcomes) report.ledger.record(v, vhat);
  }
  report.total_cond_err = report.ledger.total_cond_err();
  report.total_std_error = report.ledger.total_std_error();
  report.wall_seconds = seconds_since(start);
  return report;
}

std::uint64_t InequalitySummary::total_violations() const {
  std::uint64_t total = 0;
  for (const auto& c : checks) total += c.violations;
  return total;
}

const CheckResult& InequalitySummary::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw ArgumentError("no check named " + name);
}

namespace {

struct TrialOutcome {
  double excess = -std::numeric_limits<double>::infinity();
  bool violated = false;
  json witness;
};

json to_json_array(std::span<const double> xs) { return json(std::vector<double>(xs.begin(), xs.end())); }

// Half the pairs are independent, half are mixtures q = (1 - eps) p + eps q'
// so that the nearly-equal regime is exercised too.
std::pair<FiniteDist, FiniteDist> random_pair(std::size_t max_support, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size_dist(2, max_support);
  const std::size_t n = size_dist(rng);
  FiniteDist p = random_interior_dist(n, rng);
  FiniteDist q = random_interior_dist(n, rng);
  if (std::bernoulli_distribution(0.5)(rng)) {
    const double eps = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::vector<double> mix(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mix[i] = (1.0 - eps) * p[i] + eps * q[i];
      total += mix[i];
    }
    for (auto& m : mix) m /= total;
    q = FiniteDist(std::move(mix));
  }
  return {std::move(p), std::move(q)};
}

json pair_witness(std::uint64_t trial, const FiniteDist& p, const FiniteDist& q) {
  return json{{"trial", trial}, {"p", to_json_array(p.probs())}, {"q", to_json_array(q.probs())}};
}

TrialOutcome le_cam_trial(std::uint64_t i, std::mt19937_64& rng, const InequalityOptions& opt) {
  auto [p, q] = random_pair(opt.max_support, rng);
  const EventSet s = random_event(p.size(), rng);
  const double tv = tv_finite(p, q);
  const double lhs = p.mass(s) + (1.0 - q.mass(s));
  const double bound = le_cam_error_lower(tv);

  // tv as the supremum of P(A) - Q(A) over all subsets A.
  const std::size_t n = p.size();
  double sup = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double diff = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1U) diff += p[j] - q[j];
    }
    sup = std::max(sup, diff);
  }

  TrialOutcome out;
  out.excess = std::max(bound - lhs, std::abs(tv - sup));
  out.violated = out.excess > opt.tv_tolerance;
  if (out.violated) {
    out.witness = pair_witness(i, p, q);
    out.witness["S"] = std::vector<std::size_t>(s.indices().begin(), s.indices().end());
    out.witness["tv"] = tv;
    out.witness["tv_sup"] = sup;
    out.witness["error_sum"] = lhs;
    out.witness["lower_bound"] = bound;
  }
  return out;
}

TrialOutcome bh_trial(std::uint64_t i, std::mt19937_64& rng, const InequalityOptions& opt) {
  auto [p, q] = random_pair(opt.max_support, rng);
  const double tv = tv_finite(p, q);
  const Nats kl = kl_finite(p, q);
  const double upper = opt.bh_upper(kl);
  TrialOutcome out;
  out.excess = tv - upper;
  out.violated = out.excess > opt.tv_tolerance;
  if (out.violated) {
    out.witness = pair_witness(i, p, q);
    out.witness["tv"] = tv;
    out.witness["kl"] = kl.value();
    out.witness["upper_bound"] = upper;
  }
  return out;
}

TrialOutcome kl_cond_trial(std::uint64_t i, std::mt19937_64& rng, const InequalityOptions& opt) {
  auto [p, q] = random_pair(opt.max_support, rng);
  const EventSet s = random_event(p.size(), rng);
  const ConditionalKl c = kl_conditional_exact(p, q, s);
  TrialOutcome out;
  out.excess = c.conditional.value() - c.bound.value();
  out.violated = out.excess > opt.kl_cond_tolerance;
  if (out.violated) {
    out.witness = pair_witness(i, p, q);
    out.witness["S"] = std::vector<std::size_t>(s.indices().begin(), s.indices().end());
    out.witness["conditional_kl"] = c.conditional.value();
    out.witness["bound"] = c.bound.value();
  }
  return out;
}

// Two prefixes of length `len` sharing bits 1..shared, random afterwards,
// with independent random tails.
std::pair<BitPrefix, BitPrefix> prefix_pair(std::size_t shared, std::size_t len,
                                            std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> a(len), b(len);
  for (std::size_t i = 0; i < len; ++i) {
    a[i] = coin(rng) ? 1 : 0;
    b[i] = i < shared ? a[i] : (coin(rng) ? 1 : 0);
  }
  const Tail ta = coin(rng) ? Tail::AllOnes : Tail::AllZeros;
  const Tail tb = coin(rng) ? Tail::AllOnes : Tail::AllZeros;
  return {BitPrefix(std::move(a), ta), BitPrefix(std::move(b), tb)};
}

TrialOutcome separation_trial(std::uint64_t i, std::mt19937_64& rng, const InequalityOptions& opt) {
  const int k = std::uniform_int_distribution<int>(1, opt.max_cantor_depth)(rng);
  const double r = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
  const double theta0 = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
  const CantorFamily fam = CantorFamily::gaussian(theta0, r, 1.0);
  const std::size_t len = static_cast<std::size_t>(k) + 12;
  auto [v, w] = prefix_pair(static_cast<std::size_t>(k) - 1, len, rng);
  {
    std::vector<std::uint8_t> wb(w.bits().begin(), w.bits().end());
    wb[k - 1] = v.bit(k) ? 0 : 1;
    w = BitPrefix(std::move(wb), w.tail());
  }
  const double gap = std::abs(cantor_theta(v, fam) - cantor_theta(w, fam));
  const double lo = separation_delta(k, fam);
  const double hi = 3.0 * lo;
  const double tol = opt.cantor_tolerance * std::max(1.0, std::abs(theta0) + 2.0 * r);
  TrialOutcome out;
  out.excess = std::max(lo - gap, gap - hi);
  out.violated = out.excess > tol;
  if (out.violated) {
    out.witness = json{{"trial", i},   {"k", k},         {"r", r},   {"theta0", theta0},
                       {"v", v.to_string()}, {"w", w.to_string()}, {"gap", gap}, {"delta_k", lo}};
  }
  return out;
}

BaseModel random_base(std::mt19937_64& rng) {
  const int which = std::uniform_int_distribution<int>(0, 2)(rng);
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  if (which == 0) return GaussianLoc{scale(rng)};
  if (which == 1) return CauchyLoc{scale(rng)};
  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  std::uniform_real_distribution<double> xs(-2.0, 2.0);
  std::vector<double> values(m);
  for (auto& x : values) x = xs(rng);
  return LogisticGlm{CovariateDist(std::move(values), random_interior_dist(m, rng))};
}

TrialOutcome closeness_trial(std::uint64_t i, std::mt19937_64& rng, const InequalityOptions& opt) {
  const int k = std::uniform_int_distribution<int>(1, opt.max_cantor_depth)(rng);
  const double r = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
  const double theta0 = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  const CantorFamily fam(theta0, r, random_base(rng));
  auto [v, w] = prefix_pair(static_cast<std::size_t>(k), static_cast<std::size_t>(k) + 12, rng);
  const Nats kl = base_divergence(fam.base(), cantor_theta(v, fam), cantor_theta(w, fam));
  const double Delta = closeness_Delta(k, fam).value();
  TrialOutcome out;
  out.excess = kl.value() - Delta;
  out.violated = out.excess > opt.cantor_tolerance * std::max(1.0, Delta);
  if (out.violated) {
    out.witness = json{{"trial", i},
                       {"k", k},
                       {"family", to_string(fam.tag())},
                       {"M", fam.M()},
                       {"r", r},
                       {"theta0", theta0},
                       {"v", v.to_string()},
                       {"w", w.to_string()},
                       {"kl", kl.value()},
                       {"Delta_k", Delta}};
  }
  return out;
}

using TrialFn = TrialOutcome (*)(std::uint64_t, std::mt19937_64&, const InequalityOptions&);

CheckResult run_check(const std::string& name, TrialFn fn, std::uint64_t trials,
                      std::uint64_t seed, const InequalityOptions& opt, Execution exec,
                      int threads) {
  std::vector<TrialOutcome> outcomes(trials);
  for_each_index(trials, exec, threads, [&](std::uint64_t i) {
    std::mt19937_64 rng(derive_seed(seed, i, name));
    outcomes[i] = fn(i, rng, opt);
  });
  CheckResult result;
  result.name = name;
  result.trials = trials;
  result.worst_excess = -std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    result.worst_excess = std::max(result.worst_excess, o.excess);
    if (o.violated) {
      if (result.violations == 0) result.witness = o.witness.dump();
      ++result.violations;
    }
  }
  return result;
}

}  // namespace

InequalitySummary run_inequality_suite(std::uint64_t trials, std::uint64_t seed,
                                       const InequalityOptions& options, Execution exec,
                                       int threads) {
  if (trials == 0) throw ArgumentError("trials must be >= 1");
  if (options.max_support < 2 || options.max_support > 16) {
    throw ArgumentError("max_support must lie in [2, 16]");
  }
  if (options.max_cantor_depth < 1 || options.max_cantor_depth > 20) {
    throw ArgumentError("max_cantor_depth must lie in [1, 20]");
  }
  InequalitySummary summary;
  summary.trials = trials;
  summary.seed = seed;
  const std::pair<const char*, TrialFn> checks[] = {
      {"le_cam", le_cam_trial},
      {"bretagnolle_huber", bh_trial},
      {"conditional_kl", kl_cond_trial},
      {"cantor_separation", separation_trial},
      {"cantor_closeness", closeness_trial},
  };
  for (const auto& [name, fn] : checks) {
    summary.checks.push_back(run_check(name, fn, trials, seed, options, exec, threads));
  }
  return summary;
}

}  // namespace anytime
