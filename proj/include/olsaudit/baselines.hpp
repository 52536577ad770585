#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "olsaudit/regression_core.hpp"

namespace olsaudit {

/// Trace of a greedy removal attack. achieved_shift[s] is <beta - beta_S, e>
/// after removing the first s+1 entries of removal_order; every value comes
/// from a full refit, so the trace is recomputable.
struct AttackResult {
  std::vector<int> removal_order;
  std::vector<double> achieved_shift;
  std::optional<int> k_found;   // first prefix size whose shift reaches theta
  bool singular_stop = false;   // a refit went singular; partial order reported
};

struct AttackOptions {
  bool adaptive = false;   // re-rank after every removal
  int max_removals = -1;   // < 0: n - d - 1
};

/// AMIP-style attack: rank samples by the influence score R_i * Z_i and
/// remove them one at a time, refitting after each removal, until the fit
/// shift reaches theta. A reported k_found is a valid upper bound on
/// k_theta(e). The crossing test is inclusive (shift >= theta), so a theta
/// already met by the full fit yields k_found = 0.
AttackResult amip_attack(const RegressionData& data, const Eigen::VectorXd& e, double theta,
                         const AttackOptions& opts = {});

}  // namespace olsaudit
