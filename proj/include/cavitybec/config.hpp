#pragma once

// Run configuration for the command-line front end. Values arrive as
// key/value strings from three layers (preset, config file, flags) and are
// validated once, after the layers are merged.

#include "cavitybec/boundary.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cavitybec {

/// Bad user input. The front end maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class EngineChoice { Exact, Asymptotic, Both };
enum class OutputFormat { Csv, Json, Table };
enum class SweepScale { Linear, Log };

std::string_view to_string(EngineChoice e);
std::string_view to_string(OutputFormat f);
std::string_view to_string(SweepScale s);

struct RunConfig {
  std::string subcommand;
  std::string preset;

  std::array<double, 3> L{1.0, 1.0, 1.0};
  Boundary bc = Boundary::Neumann;
  double m = 1.0;
  double Q = 100.0;
  EngineChoice engine = EngineChoice::Exact;

  /// Sweep bounds as multiples of the subcommand's reference temperature.
  std::optional<double> t_min, t_max;
  int points = 200;
  SweepScale scale = SweepScale::Linear;

  std::string out;  ///< empty: stdout
  std::optional<OutputFormat> format;

  // Counting.
  std::vector<std::int64_t> a{1, 1};
  double epsilon = 1.0;
  std::int64_t epsilon_max = 10000;
  std::uint64_t budget = 100'000'000;

  // Charge engine and regime map.
  double cutoff = 40.0;
  double dominance = 3.0;
  double q_tilde = 1e4;
  int grid = 31;
  double ratio_max = 1e3;

  /// Every key that was set, with the layer it came from, in key order.
  std::vector<std::pair<std::string, std::string>> resolved;

  OutputFormat output_format() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Keys understood by presets, config files and flags.
const std::vector<std::string>& config_keys();

/// Names of the built-in parameter sets.
std::vector<std::string> preset_names();
/// Throws ValidationError for an unknown name.
KeyValues preset_values(const std::string& name);

/// Parses `key = value` lines; `#` starts a comment.
KeyValues parse_config_text(const std::string& text);
KeyValues read_config_file(const std::string& path);

/// Merges the layers (flags win over the file, the file over the preset) and
/// validates the result.
RunConfig resolve_config(const std::string& subcommand, const std::string& preset,
                         const KeyValues& file_values, const KeyValues& flag_values);

}  // namespace cavitybec
