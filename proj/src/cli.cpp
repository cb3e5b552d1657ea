#include "anytime/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "anytime/bounds.hpp"
#include "anytime/config.hpp"
#include "anytime/errors.hpp"
#include "anytime/harness.hpp"
#include "anytime/report_io.hpp"

namespace anytime {

double coverage_pass_threshold(double alpha, std::uint64_t replications) {
  return (1.0 - alpha) - 3.0 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(replications));
}

namespace {

// Experiment flags are captured as text and applied through the config
// parser, so a flag and the matching config key behave identically.
struct ExperimentFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App* cmd, const std::string& flag, const std::string& key,
           const std::string& help, const std::string& default_text) {
    auto* opt = cmd->add_option(flag, values[key], help)->default_str(default_text);
    options[key] = opt;
  }

  bool given(const std::string& key) const {
    auto it = options.find(key);
    return it != options.end() && it->second->count() > 0;
  }

  ExperimentConfig resolve(ExperimentKind kind) const {
    ExperimentConfig config;
    config.kind = kind;
    if (!given("seed")) {
      if (const char* env = std::getenv("ANYTIME_SEED"); env != nullptr && *env != '\0') {
        apply_config_value(config, "seed", env);
      }
    }
    if (!config_path.empty()) config = load_config(config_path, config);
    config.kind = kind;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) apply_config_value(config, key, values.at(key));
    }
    config.validate();
    return config;
  }
};

void add_family_flags(CLI::App* cmd, ExperimentFlags& f) {
  f.add(cmd, "--family", "family", "Base model", "gaussian");
  f.options["family"]->check(CLI::IsMember({"gaussian", "cauchy", "logistic", "median"}));
  f.add(cmd, "--sigma", "sigma", "Noise scale sigma", "1");
  f.add(cmd, "--r", "r", "Cantor radius r", "1");
  f.add(cmd, "--theta0", "theta0", "Cantor offset theta0", "0");
}

void add_run_flags(CLI::App* cmd, ExperimentFlags& f) {
  f.add(cmd, "--seed", "seed", "Master seed (ANYTIME_SEED if absent)", std::to_string(kDefaultSeed));
  f.add(cmd, "--threads", "threads", "Worker threads", std::to_string(available_threads()));
  f.add(cmd, "--out", "out", "Output path prefix", "none");
  cmd->add_option("--config", f.config_path, "key = value config file; flags override it");
}

struct CurveFlags {
  double alpha = 0.1;
  double sigma = 1.0;
  std::uint64_t n_min = 16;
  std::uint64_t n_max = std::uint64_t{1} << 30;
  std::size_t points = 64;
  std::string out;
};

void add_curve_flags(CLI::App* cmd, CurveFlags& f) {
  cmd->add_option("--alpha", f.alpha, "Confidence level alpha")->capture_default_str();
  cmd->add_option("--sigma", f.sigma, "Gaussian sigma")->capture_default_str();
  cmd->add_option("--n-min", f.n_min, "Smallest n")->capture_default_str();
  cmd->add_option("--n-max", f.n_max, "Largest n")->capture_default_str();
  cmd->add_option("--points", f.points, "Grid size (log spaced)")->capture_default_str();
  cmd->add_option("--out", f.out, "CSV path");
}

std::vector<CurveRow> curve_rows(const CurveFlags& f) {
  if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(f.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (f.n_min < 1 || f.n_max < f.n_min) throw ConfigError("need 1 <= n-min <= n-max");
  if (f.points < 1) throw ConfigError("points must be >= 1");
  const auto grid = log_spaced_grid(f.n_min, f.n_max, f.points);
  return gaussian_curves(f.alpha, f.sigma, grid);
}

int cmd_coverage(const ExperimentFlags& flags, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = flags.resolve(ExperimentKind::Coverage);
  const CoverageReport report = run_coverage(config);
  nlohmann::json doc = to_json(report);
  doc["config"] = to_json(config);
  out << doc.dump(2) << '\n';
  if (!config.output.empty()) persist_coverage(config.output, config, report);
  const double threshold = coverage_pass_threshold(config.alpha, config.replications);
  err << "coverage " << report.coverage << " (threshold " << threshold << "), "
      << report.soundness_violations << " soundness violations, " << report.wall_seconds
      << " s\n";
  return report.coverage >= threshold && report.soundness_violations == 0 ? kExitOk
                                                                          : kExitAssertionFailed;
}

int cmd_testgame(const ExperimentFlags& flags, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = flags.resolve(ExperimentKind::TestingGame);
  const TestingGameReport report = run_testing_game(config);
  nlohmann::json doc = to_json(report);
  doc["config"] = to_json(config);
  out << doc.dump(2) << '\n';
  if (!config.output.empty()) persist_testing_game(config.output, config, report);
  if (report.exhausted_at) {
    err << "schedule exhausted at depth " << *report.exhausted_at << "; deeper levels dropped\n";
  }
  err << "sum of conditional errors " << report.total_cond_err << " (budget " << report.budget
      << ", stderr " << report.total_std_error << "), " << report.wall_seconds << " s\n";
  return report.within_budget() ? kExitOk : kExitAssertionFailed;
}

int cmd_klcheck(const ExperimentFlags& flags, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = flags.resolve(ExperimentKind::InequalitySuite);
  const InequalitySummary summary =
      run_inequality_suite(config.trials, config.seed, {}, Execution::Parallel, config.threads);
  out << to_json(summary).dump(2) << '\n';
  if (!config.output.empty()) persist_inequality_suite(config.output, summary);
  for (const auto& c : summary.checks) {
    if (c.violations > 0) err << c.name << ": " << c.violations << " violations\n";
  }
  return summary.passed() ? kExitOk : kExitAssertionFailed;
}

void emit_curves(const CurveFlags& flags, const std::vector<CurveRow>& rows, std::ostream& out) {
  if (flags.out.empty()) {
    write_curves_csv(out, rows);
  } else {
    std::ostringstream csv;
    write_curves_csv(csv, rows);
    write_text_file(flags.out, csv.str());
  }
}

int cmd_curves(const CurveFlags& flags, std::ostream& out) {
  emit_curves(flags, curve_rows(flags), out);
  return kExitOk;
}

int cmd_sandwich(const CurveFlags& flags, std::ostream& out, std::ostream& err) {
  const auto rows = curve_rows(flags);
  const SandwichSummary s = sandwich_summary(rows);
  if (!flags.out.empty()) emit_curves(flags, rows, out);
  nlohmann::json doc{{"rows_checked", s.rows_checked},
                     {"min_ratio", s.min_ratio},
                     {"max_ratio", s.max_ratio},
                     {"ratio_range", {1.0, 20.0}},
                     {"violations", s.violations},
                     {"passed", s.violations == 0 && s.rows_checked > 0}};
  out << doc.dump(2) << '\n';
  if (s.rows_checked == 0) err << "no grid point with n >= 16\n";
  if (s.violations > 0) err << "sandwich fails first at n = " << s.first_violation << '\n';
  return s.violations == 0 && s.rows_checked > 0 ? kExitOk : kExitAssertionFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anytime-valid estimation: coverage experiments, testing game, bound curves",
               "anytime"};
  app.require_subcommand(1, 1);

  ExperimentFlags coverage_flags;
  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage of the doubling estimator");
  coverage_flags.add(coverage, "--alpha", "alpha", "Confidence level alpha", "0.1");
  add_family_flags(coverage, coverage_flags);
  coverage_flags.add(coverage, "--depth", "depth", "Cantor depth K", "6");
  coverage_flags.add(coverage, "--horizon", "horizon", "Horizon N", "32768");
  coverage_flags.add(coverage, "--reps", "reps", "Replications R", "2000");
  add_run_flags(coverage, coverage_flags);

  ExperimentFlags game_flags;
  auto* testgame = app.add_subcommand("testgame", "Sequential testing game with the derived bit tests");
  game_flags.add(testgame, "--alpha", "alpha", "Confidence level alpha", "0.1");
  add_family_flags(testgame, game_flags);
  game_flags.add(testgame, "--depth", "depth", "Cantor depth K", "6");
  game_flags.add(testgame, "--reps", "reps", "Replications R", "2000");
  game_flags.add(testgame, "--estimator", "estimator", "doubling or oracle", "doubling");
  game_flags.options["estimator"]->check(CLI::IsMember({"doubling", "oracle"}));
  add_run_flags(testgame, game_flags);

  ExperimentFlags kl_flags;
  auto* klcheck = app.add_subcommand("klcheck", "Randomised check of the two-point inequalities");
  kl_flags.add(klcheck, "--trials", "trials", "Trials per check", "10000");
  add_run_flags(klcheck, kl_flags);

  CurveFlags curve_flags;
  auto* curves = app.add_subcommand("curves", "Export lower-bound and width curves as CSV");
  add_curve_flags(curves, curve_flags);

  CurveFlags sandwich_flags;
  auto* sandwich =
      app.add_subcommand("sandwich", "Curves plus the check lb_loglog <= width <= 20 lb_loglog");
  add_curve_flags(sandwich, sandwich_flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (const auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (coverage->parsed()) return cmd_coverage(coverage_flags, out, err);
    if (testgame->parsed()) return cmd_testgame(game_flags, out, err);
    if (klcheck->parsed()) return cmd_klcheck(kl_flags, out, err);
    if (curves->parsed()) return cmd_curves(curve_flags, out);
    if (sandwich->parsed()) return cmd_sandwich(sandwich_flags, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace anytime
