#pragma once

#include <stdexcept>
#include <string>

namespace anytime {

// Mismatched support sizes, vector/matrix shapes, or out-of-support indices.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Conditioning on an event of zero probability.
class ConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally invalid arguments (e.g. prefixes that do not share the
// required common prefix).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// No n <= n_max satisfies the schedule condition.
class ScheduleExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace anytime
