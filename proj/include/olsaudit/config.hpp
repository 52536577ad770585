#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "olsaudit/errors.hpp"

namespace olsaudit {

/// Everything the audit subcommand needs: dataset location, column roles,
/// preprocessing rules, algorithm knobs, thresholds and outputs. Loaded from
/// a JSON or TOML file; command-line flags override individual fields.
struct AuditConfig {
  std::string input;
  std::string output = "report.json";
  std::vector<std::string> output_formats = {"json"};  // json | csv | curve

  std::string mode = "ols";  // ols | iv

  std::string target;
  std::vector<std::string> continuous;
  std::vector<std::string> categorical;
  std::string weight;
  std::string direction;                  // one continuous feature by name...
  std::vector<double> direction_vector;   // ...or an explicit vector

  std::map<std::string, std::vector<std::string>> drop_values;  // column -> values to drop
  std::vector<std::string> log_shift;  // columns replaced by log(x + median(x))

  std::string instrument, endogenous, outcome;  // iv mode roles

  std::vector<std::string> backends = {"rti"};
  int k_max = -1;

  bool threshold_sign = true;
  bool threshold_two_sigma = true;
  std::vector<double> custom_thresholds;

  std::string attack = "amip";  // none | amip | adaptive | both
  int attack_max_removals = -1;

  bool allow_product_categories = false;
  bool strict_categories = false;
  double memory_cap_gib = 16.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
  nlohmann::json to_json() const;
  static AuditConfig from_json(const nlohmann::json& j);
};

/// Dispatches on the file extension: .json or .toml.
AuditConfig load_config_file(const std::string& path);

/// Minimal TOML reader covering the subset this tool uses: top-level and
/// [table] sections, string / number / boolean scalars, flat arrays, and
/// dotted keys inside drop tables. Anything else is rejected loudly.
nlohmann::json toml_to_json(const std::string& text);

/// FNV-1a over the canonical JSON dump; stable across platforms.
std::string config_hash(const AuditConfig& cfg);

}  // namespace olsaudit
