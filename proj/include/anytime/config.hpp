#pragma once

// Experiment configs as plain `key = value` text. Blank lines and lines
// starting with '#' are ignored. Keys:
//   kind       coverage | testgame | klcheck
//   family     gaussian | cauchy | logistic | median
//   sigma, r, theta0, alpha       real numbers
//   horizon, reps, depth, trials, seed, threads   integers
//   estimator  doubling | oracle
//   out        output path prefix

#include <iosfwd>
#include <string>

#include "anytime/harness.hpp"

namespace anytime {

FamilyTag parse_family_tag(const std::string& text);
ExperimentKind parse_experiment_kind(const std::string& text);
GameEstimator parse_game_estimator(const std::string& text);

/// Sets one field. Throws ConfigError for unknown keys or unparsable values.
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Parses onto `base`; throws ConfigError with the line number on error.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

void write_config(std::ostream& out, const ExperimentConfig& config);

}  // namespace anytime
