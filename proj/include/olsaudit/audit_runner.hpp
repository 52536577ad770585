#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "olsaudit/config.hpp"
#include "olsaudit/datagen.hpp"
#include "olsaudit/ohare.hpp"
#include "olsaudit/report.hpp"

namespace olsaudit {

/// Ingested dataset: numeric columns after row filtering and the log-shift
/// transforms, plus the bucket partition built from the categorical block.
struct IngestedFrame {
  long n = 0;
  long rows_dropped = 0;
  std::map<std::string, long> dropped_by_rule;
  std::map<std::string, Eigen::VectorXd> numeric;
  std::optional<Buckets> buckets;
  std::vector<std::string> category_labels;
  Eigen::VectorXd weights;  // size 0 when unweighted
};

IngestedFrame ingest(const AuditConfig& cfg);

/// Full audit: ingest, certify (ACRE or OHARE, both directions), attack,
/// and certificate assembly. Does not write any files; see emit().
AuditReport run_audit(const AuditConfig& cfg);

/// Writes a synthetic dataset in the CSV schema ingest() consumes
/// (columns x1..xd, category, y).
void write_synthetic_csv(const std::string& path, const SyntheticData& sd);

}  // namespace olsaudit
