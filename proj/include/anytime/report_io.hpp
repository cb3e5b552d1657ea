#pragma once

// Report persistence. Wall-clock time is kept out of every file so that the
// same config always produces byte-identical output.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "anytime/harness.hpp"

namespace anytime {

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const CoverageReport& report);
nlohmann::json to_json(const TestingGameReport& report);
nlohmann::json to_json(const InequalitySummary& summary);

/// CSV with header n,first_failures, one row per n with at least one failure.
void write_failure_histogram_csv(std::ostream& out, const CoverageReport& report);

/// Throws ConfigError if the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

/// <prefix>.json, <prefix>.ledger.csv, <prefix>.failures.csv
void persist_coverage(const std::string& prefix, const ExperimentConfig& config,
                      const CoverageReport& report);
/// <prefix>.json, <prefix>.ledger.csv
void persist_testing_game(const std::string& prefix, const ExperimentConfig& config,
                          const TestingGameReport& report);
/// <prefix>.json
void persist_inequality_suite(const std::string& prefix, const InequalitySummary& summary);

}  // namespace anytime
