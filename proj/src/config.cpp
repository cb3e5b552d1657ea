#include "anytime/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "anytime/errors.hpp"

namespace anytime {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  in.imbue(std::locale::classic());
  double out = 0.0;
  if (!(in >> out) || !(in >> std::ws).eof()) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return out;
}

}  // namespace

FamilyTag parse_family_tag(const std::string& text) {
  if (text == "gaussian") return FamilyTag::Gaussian;
  if (text == "cauchy") return FamilyTag::Cauchy;
  if (text == "logistic") return FamilyTag::Logistic;
  if (text == "median") return FamilyTag::Median;
  throw ConfigError("unknown family '" + text + "'");
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  if (text == "coverage") return ExperimentKind::Coverage;
  if (text == "testgame") return ExperimentKind::TestingGame;
  if (text == "klcheck") return ExperimentKind::InequalitySuite;
  throw ConfigError("unknown experiment kind '" + text + "'");
}

GameEstimator parse_game_estimator(const std::string& text) {
  if (text == "doubling") return GameEstimator::Doubling;
  if (text == "oracle") return GameEstimator::Oracle;
  throw ConfigError("unknown estimator '" + text + "'");
}

void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
  if (key == "kind") {
    config.kind = parse_experiment_kind(value);
  } else if (key == "family") {
    config.family.kind = parse_family_tag(value);
  } else if (key == "sigma") {
    config.family.sigma = parse_real(key, value);
  } else if (key == "r") {
    config.family.r = parse_real(key, value);
  } else if (key == "theta0") {
    config.family.theta0 = parse_real(key, value);
  } else if (key == "alpha") {
    config.alpha = parse_real(key, value);
  } else if (key == "horizon") {
    config.horizon = parse_uint(key, value);
  } else if (key == "reps") {
    config.replications = parse_uint(key, value);
  } else if (key == "depth") {
    config.depth = parse_int(key, value);
  } else if (key == "trials") {
    config.trials = parse_uint(key, value);
  } else if (key == "seed") {
    config.seed = parse_uint(key, value);
  } else if (key == "threads") {
    config.threads = parse_int(key, value);
  } else if (key == "estimator") {
    config.estimator = parse_game_estimator(value);
  } else if (key == "out") {
    config.output = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_config_value(base, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const ExperimentConfig& config) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(17);
  s << "kind = " << to_string(config.kind) << '\n'
    << "family = " << to_string(config.family.kind) << '\n'
    << "sigma = " << config.family.sigma << '\n'
    << "r = " << config.family.r << '\n'
    << "theta0 = " << config.family.theta0 << '\n'
    << "alpha = " << config.alpha << '\n'
    << "horizon = " << config.horizon << '\n'
    << "reps = " << config.replications << '\n'
    << "depth = " << config.depth << '\n'
    << "trials = " << config.trials << '\n'
    << "seed = " << config.seed << '\n'
    << "threads = " << config.threads << '\n'
    << "estimator = " << to_string(config.estimator) << '\n';
  if (!config.output.empty()) s << "out = " << config.output << '\n';
  out << s.str();
}

}  // namespace anytime
