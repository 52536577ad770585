#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "olsaudit/acre.hpp"
#include "olsaudit/baselines.hpp"

namespace olsaudit {

inline constexpr const char* kSoftwareVersion = "0.1.0";
inline constexpr const char* kReportSchemaVersion = "1";

/// Results for one regression: bounds for both audit directions (original
/// <beta, e> units), the certificates derived from them, and attack traces.
struct RegressionAudit {
  std::string name;
  long n = 0, d = 0, m = 0;
  std::string algorithm;  // "acre" | "ohare"
  double beta_e = 0.0;
  double two_sigma = 0.0;
  double e_scale = 1.0;
  RemovalBounds up;    // direction +e
  RemovalBounds down;  // direction -e
  std::optional<int> k_sign_lower;
  std::optional<int> k_two_sigma_lower;
  std::vector<std::pair<double, int>> custom_certs;  // (theta, certified k)
  std::optional<AttackResult> amip;
  std::optional<AttackResult> amip_adaptive;
  double wall_seconds = 0.0;
};

struct AuditReport {
  std::string schema_version = kReportSchemaVersion;
  std::string software_version = kSoftwareVersion;
  std::string config_hash;
  std::uint64_t seed = 0;
  nlohmann::json config_echo;

  long n_ingested = 0;
  long rows_dropped = 0;
  std::map<std::string, long> dropped_by_rule;

  std::vector<RegressionAudit> regressions;
  std::optional<int> iv_k_sign_lower;

  double wall_seconds = 0.0;
  long peak_memory_bytes = 0;
};

/// JSON is the canonical machine format. Infinite bounds are encoded as
/// null (U: +inf, L: -inf); finite doubles round-trip bit-exact.
nlohmann::json report_to_json(const AuditReport& report);
AuditReport report_from_json(const nlohmann::json& j);

/// format: "json" (canonical), "csv" (flat per-k table: k, L, U,
/// first_order for the +e direction), or "curve" (plot-ready k, L, U plus
/// the AMIP attack trace). Multi-regression reports write one table per
/// regression with the regression name suffixed before the extension.
void emit(const AuditReport& report, const std::string& format, const std::string& path);

long peak_memory_bytes();

}  // namespace olsaudit
