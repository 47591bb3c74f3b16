#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "alperf/harness.hpp"

namespace alperf {

/// Malformed or invalid configuration. Messages name the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParsedConfig {
  ExperimentSpec spec;
  /// Top-level keys (and classifier sub-keys) that were filled from defaults.
  std::vector<std::string> defaults_applied;
};

/// Parses and validates a JSON experiment configuration. Unknown keys are
/// rejected. Scenario-dependent defaults come from default_spec().
ParsedConfig parse_config(const std::string& text);

/// Full, explicit JSON form of a spec; parse_config(spec_to_json(s)) yields s.
nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec);

}  // namespace alperf
