#include "anytime/report_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "anytime/errors.hpp"

namespace anytime {

using nlohmann::json;

namespace {

json ledger_rows(const CondErrLedger& ledger, std::span<const double> floors) {
  json rows = json::array();
  for (std::size_t k = 1; k <= ledger.depth(); ++k) {
    json row{{"k", k},
             {"trials", ledger.trials(k)},
             {"errors", ledger.errors(k)},
             {"cond_err_hat", ledger.cond_err(k)},
             {"std_error", ledger.std_error(k)}};
    if (k <= floors.size()) row["lower_bound_quarter_exp"] = floors[k - 1];
    rows.push_back(std::move(row));
  }
  return rows;
}

json schedule_json(const TestSchedule& schedule) {
  return json(std::vector<std::uint64_t>(schedule.counts().begin(), schedule.counts().end()));
}

}  // namespace

json to_json(const ExperimentConfig& config) {
  return json{{"kind", to_string(config.kind)},
              {"family",
               {{"kind", to_string(config.family.kind)},
                {"sigma", config.family.sigma},
                {"r", config.family.r},
                {"theta0", config.family.theta0}}},
              {"alpha", config.alpha},
              {"horizon", config.horizon},
              {"replications", config.replications},
              {"depth", config.depth},
              {"trials", config.trials},
              {"seed", config.seed},
              {"estimator", to_string(config.estimator)}};
}

json to_json(const CoverageReport& report) {
  json hist = json::array();
  for (const auto& [n, count] : report.first_failure_histogram) hist.push_back({n, count});
  return json{{"replications", report.replications},
              {"failures", report.failures},
              {"coverage", report.coverage},
              {"interval95", {report.interval.lo, report.interval.hi}},
              {"soundness_violations", report.soundness_violations},
              {"schedule", schedule_json(report.schedule)},
              {"ledger", ledger_rows(report.ledger, {})},
              {"first_failure_histogram", std::move(hist)}};
}

json to_json(const TestingGameReport& report) {
  return json{{"estimator", to_string(report.estimator)},
              {"replications", report.replications},
              {"requested_depth", report.requested_depth},
              {"exhausted_at", report.exhausted_at ? json(*report.exhausted_at) : json(nullptr)},
              {"schedule", schedule_json(report.schedule)},
              {"ledger", ledger_rows(report.ledger, report.floors)},
              {"budget", report.budget},
              {"total_cond_err", report.total_cond_err},
              {"total_std_error", report.total_std_error},
              {"within_budget", report.within_budget()}};
}

json to_json(const InequalitySummary& summary) {
  json checks = json::array();
  for (const auto& c : summary.checks) {
    checks.push_back({{"name", c.name},
                      {"trials", c.trials},
                      {"violations", c.violations},
                      {"worst_excess", c.worst_excess},
                      {"witness", c.witness.empty() ? json(nullptr) : json::parse(c.witness)}});
  }
  return json{{"trials", summary.trials},
              {"seed", summary.seed},
              {"total_violations", summary.total_violations()},
              {"passed", summary.passed()},
              {"checks", std::move(checks)}};
}

void write_failure_histogram_csv(std::ostream& out, const CoverageReport& report) {
  out << "n,first_failures\n";
  for (const auto& [n, count] : report.first_failure_histogram) out << n << ',' << count << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

void persist_coverage(const std::string& prefix, const ExperimentConfig& config,
                      const CoverageReport& report) {
  json doc = to_json(report);
  doc["config"] = to_json(config);
  write_text_file(prefix + ".json", doc.dump(2) + "\n");
  std::ostringstream ledger;
  write_ledger_csv(ledger, report.ledger);
  write_text_file(prefix + ".ledger.csv", ledger.str());
  std::ostringstream failures;
  write_failure_histogram_csv(failures, report);
  write_text_file(prefix + ".failures.csv", failures.str());
}

void persist_testing_game(const std::string& prefix, const ExperimentConfig& config,
                          const TestingGameReport& report) {
  json doc = to_json(report);
  doc["config"] = to_json(config);
  write_text_file(prefix + ".json", doc.dump(2) + "\n");
  std::ostringstream ledger;
  write_ledger_csv(ledger, report.ledger, report.floors);
  write_text_file(prefix + ".ledger.csv", ledger.str());
}

void persist_inequality_suite(const std::string& prefix, const InequalitySummary& summary) {
  write_text_file(prefix + ".json", to_json(summary).dump(2) + "\n");
}

}  // namespace anytime
