#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "surfgrow/experiments.hpp"
#include "surfgrow/solver.hpp"

namespace surfgrow {

/// Everything a CLI run needs: the trajectory config, the study parameters
/// and output options.
struct RunConfig {
  SimulationConfig sim;
  StudyParams study;
  bool eps_given = false;  ///< false selects the default ladder for studies
  std::string out_dir = "out";
  bool pgm = false;
};

/// Default regularization ladder used by the studies when eps is not set.
inline const std::vector<double> kDefaultLadder{0.25, 0.125, 0.0625};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Recognized keys, in snapshot order. Flags are the same names with a
/// leading "--" (underscores may be written as dashes).
const std::vector<std::string>& config_keys();

/// Sets one key. Throws ConfigError "key: reason" on unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses flat "key = value" text with # comments into cfg (overriding what
/// is there). Errors carry the line number and key.
void parse_config_text(const std::string& text, RunConfig& cfg, const std::string& origin = "config");
void parse_config_file(const std::filesystem::path& path, RunConfig& cfg);

/// Range checks on the combined config; throws ConfigError naming the key.
void validate(const RunConfig& cfg);

/// Canonical key/value snapshot (round-trips through parse_config_text).
std::vector<std::pair<std::string, std::string>> snapshot(const RunConfig& cfg);

/// Shortest round-trip decimal for a double.
std::string format_number(double v);

}  // namespace surfgrow
