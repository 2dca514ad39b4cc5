#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gqarch/likelihood.hpp"
#include "gqarch/montecarlo.hpp"
#include "gqarch/optimizer.hpp"
#include "gqarch/simulator.hpp"

namespace gqarch {

enum class Command { simulate, estimate, mc, diagnose, feasibility };

std::string to_string(Command c);
Command parse_command(const std::string& name);

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitNumerical = 4 };

/// Resolved configuration of one run. `parameters` holds every key the command
/// accepts, with defaults filled in, so it fully describes the run.
struct RunConfig {
  Command command = Command::feasibility;
  std::map<std::string, std::string> parameters;
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = 0;

  [[nodiscard]] const std::string& get(const std::string& key) const;
  [[nodiscard]] bool has(const std::string& key) const { return parameters.count(key) != 0; }
  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] std::size_t get_size(const std::string& key) const;
  [[nodiscard]] std::uint64_t get_u64(const std::string& key) const;
  [[nodiscard]] bool get_bool(const std::string& key) const;
  [[nodiscard]] std::vector<double> get_list(const std::string& key) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct KeySpec {
  std::string default_value;
  bool required = false;
};

/// Keys accepted by a command with their defaults.
const std::map<std::string, KeySpec>& command_keys(Command c);

/// Flat `key = value` text, '#' starts a comment line.
std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source = "<config>");
std::map<std::string, std::string> read_key_value_file(const std::string& path);

/// Validates keys (unknown keys and missing required keys are UsageErrors)
/// and fills defaults. Later maps override earlier ones.
RunConfig resolve_config(Command command, const std::vector<std::map<std::string, std::string>>& layers);

/// "# gqarch <command>" followed by "# key = value" for every parameter.
std::vector<std::string> config_comment_block(const RunConfig& config);
/// Inverse of config_comment_block; ignores comment lines that are not key = value pairs.
RunConfig parse_config_comments(const std::vector<std::string>& lines);

// Typed views of a config.
Theta theta_from_config(const RunConfig& config, const std::string& suffix = "");
ParamBox box_from_config(const RunConfig& config);
OptimOptions optim_options_from_config(const RunConfig& config);
PastMode past_mode_from_config(const RunConfig& config);
Innovation innovation_from_config(const RunConfig& config);
McDesign mc_design_from_config(const RunConfig& config);

/// Executes one command. Human-readable output goes to `out`, diagnostics to `err`.
/// Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gqarch
