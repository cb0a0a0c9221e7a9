#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nlfrac {

/// Invalid or inconsistent experiment configuration (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { ml, caputo, fode, solve, holder, sweep };

Mode parse_mode(std::string_view name);
std::string mode_name(Mode m);

struct TimeSection {
  double t_start = 0.0;
  double t_end = 1.0;
  /// 0 means: derive from the monotonicity limit (solve, holder, sweep).
  std::size_t n_steps = 256;
};

struct SpaceSection {
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t n_points = 65;
};

struct MlSection {
  double t_min = -5.0;
  double t_max = 3.0;
  std::size_t n_points = 81;
};

struct DataSection {
  std::string preset = "constant";
  double value = 1.0;
  double amplitude = 1.0;
  double center = 0.3;
  double width = 0.25;
  double forcing = 0.0;
  double space_exponent = 0.3;
  double time_exponent = 0.0;
  double x0 = 0.0;
  double t0 = 0.0;
};

struct OutputSection {
  std::string dir = "out";
  bool checkpoint = false;
};

/// Parsed experiment description. Every key is optional; see README for the schema.
struct ExperimentConfig {
  Mode mode = Mode::ml;
  double alpha = 0.5;
  std::vector<double> alphas{0.6, 0.8, 0.95};
  double sigma = 0.5;
  double lambda = 1.0;
  double Lambda = 1.0;
  double C1 = 1.0;
  double epsilon0 = 0.05;
  double nu = 0.3;
  double c_stab = 0.9;
  std::size_t depth = 4;
  double ratio = 0.25;
  std::string op = "pucci_plus";
  std::string history = "power";
  TimeSection time;
  SpaceSection space;
  MlSection ml;
  DataSection data;
  OutputSection output;
  /// Canonical JSON echo of the parsed configuration.
  std::string echo;
};

/// Parses and validates a JSON configuration for the given mode. Unknown keys,
/// wrong types and out-of-range values raise ConfigError.
ExperimentConfig parse_config(std::string_view text, Mode mode);

/// Runs one experiment, writing result files and manifest.json into out_dir.
/// Returns the list of result files written (manifest excluded).
std::vector<std::filesystem::path> run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                       std::uint64_t seed);

/// Full command-line entry point: `nlfrac <mode> --config <path> [--out <dir>] [--seed <u64>]`.
/// Returns 0 on success, 2 on configuration errors, 3 on numerical failures;
/// errors are reported as one JSON object on `err`.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nlfrac
