#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oal/errors.hpp"

namespace oal {

inline constexpr const char* kVersion = "0.1.0";

// Key-value run description. Parsed from a text file of "key = value" lines
// ('#' starts a comment); command-line overrides are applied on top and win.
// Grid-valued keys accept either a comma list ("0,0.5,1") or a linspace
// "lo:hi:n". Keys that no experiment reads are a config error.
struct RunConfig {
  std::string experiment;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<double> get_grid(const std::string& key, const std::string& def) const;

  // Keys read so far; used to reject unknown keys after dispatch.
  mutable std::set<std::string> used;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// "key=value" strings, e.g. from repeated --set flags.
void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides);

struct ExperimentResult {
  std::vector<std::string> csv_paths;
  std::string meta_path;
  int points_total = 0;
  int points_failed = 0;  // flagged rows (ok=0), not fatal
};

// Dispatch on config.experiment and write CSV curves plus a JSON metadata
// record (resolved parameters, code version, timestamp) under outdir.
// Throws ConfigError for invalid configs and solver errors otherwise;
// per-point failures become flagged rows instead.
ExperimentResult run_experiment(const RunConfig& config, const std::string& outdir);

}  // namespace oal
