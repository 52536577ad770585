#pragma once

#include <Eigen/Dense>
#include <vector>

#include "olsaudit/acre.hpp"
#include "olsaudit/msn_bounds.hpp"
#include "olsaudit/regression_core.hpp"

namespace olsaudit {

/// Partition of the samples into the support sets of one categorical
/// feature's dummy columns. u holds the per-sample dummy weight u_{b(i),i},
/// normalized so every bucket's weight vector has unit norm (regression
/// weights, when present, are folded in as sqrt(w)).
struct Buckets {
  std::vector<int> assignment;          // n entries in [0, m)
  std::vector<std::vector<int>> members;  // per-bucket sample indices
  Eigen::VectorXd u;                    // n
  int m = 0;

  int size(int j) const { return int(members[size_t(j)].size()); }
  Eigen::Index n() const { return Eigen::Index(assignment.size()); }

  static Buckets build(const std::vector<int>& assignment, const Eigen::VectorXd& weights);
};

/// Continuous features and labels after subtracting the per-bucket weighted
/// projections; OLS on (Xt, Yt) equals the continuous block of the full
/// dummy-variable OLS.
struct ReaveragedRegression {
  Eigen::MatrixXd Xt;                 // n x d
  Eigen::VectorXd Yt;                 // n
  Eigen::MatrixXd bucket_feature_proj;  // m x d
  Eigen::VectorXd bucket_label_proj;    // m
};

ReaveragedRegression reaverage(const RegressionData& data, const Buckets& buckets,
                               const Eigen::VectorXd& e);

/// Per-bucket first-order tables, each indexed by k_j in [0, n_j]:
///   d:        max direct sum of R_i Z_i over size-k_j subsets
///   sum_r_max/min, sum_z_max/min: extremes of sum R_i u_i and sum Z_i u_i
///   c_plus/c_minus: max/min over the four corner products of those extremes
struct BucketFirstOrderTables {
  std::vector<std::vector<double>> d;
  std::vector<std::vector<double>> sum_r_max, sum_r_min;
  std::vector<std::vector<double>> sum_z_max, sum_z_min;
  std::vector<std::vector<double>> c_plus, c_minus;
};

BucketFirstOrderTables bucket_first_order_tables(const Eigen::VectorXd& R,
                                                 const Eigen::VectorXd& Z,
                                                 const Buckets& buckets);

/// Per-bucket higher-order tables (k_j in [0, n_j]):
///   M:    MSN bound on ||sum_{i in T_j} Xn_i u_i||, refined via the bucket
///         zero-sum symmetry M(k) := min(M(k), M(n_j - k))
///   Ubar: min over removals of the retained weight mass ||u_{j,S}||^2
///   rho:  bound on |sum R_i u_i| (sum of largest |R_i u_i|, symmetry-refined)
///   zeta: same for |Z_i u_i|
struct BucketHigherOrderTables {
  std::vector<std::vector<double>> M, Ubar, rho, zeta;
};

BucketHigherOrderTables bucket_higher_order_tables(const NormalizedRegression& norm,
                                                   const Buckets& buckets,
                                                   MsnBackend per_bucket_backend = MsnBackend::Rti);

/// F[k] = max over k_1 + ... + k_m = k (k_j <= n_j) of sum_j tables[j][k_j].
/// Every table must start with 0 at index 0.
std::vector<double> dp_knapsack_1d(const std::vector<std::vector<double>>& tables, int k_max);

/// 2D variant: F(u, k) adds the exactly-u-nonzero-parts constraint.
/// -inf marks infeasible (u, k) combinations.
struct DpTable2d {
  Eigen::MatrixXd F;

  bool feasible(int u, int k) const { return std::isfinite(F(u, k)); }
  double at(int u, int k) const { return F(u, k); }
  int u_max() const { return int(F.rows()) - 1; }
  int k_max() const { return int(F.cols()) - 1; }
};

DpTable2d dp_knapsack_2d(const std::vector<std::vector<double>>& tables, int u_max, int k_max);

struct OhareOptions {
  int k_max = -1;  // < 0: min(n - d - m - 1, n / 2)
  BoundUnits units = BoundUnits::Original;
  MsnBackend per_bucket_backend = MsnBackend::Rti;
};

/// The OHARE assembly. `norm` must be the whitened reaveraged regression
/// (obtained via reaverage + fit_ols + normalize on the same buckets).
RemovalBounds ohare_bounds(const NormalizedRegression& norm, const Buckets& buckets,
                           const OhareOptions& opts = {});

/// Convenience pipeline: reaverage -> fit -> whiten -> bound.
struct OhareAudit {
  ReaveragedRegression reavg;
  OlsFit fit;
  NormalizedRegression norm;
  RemovalBounds bounds;
};

OhareAudit run_ohare(const RegressionData& data, const Buckets& buckets,
                     const Eigen::VectorXd& e, const OhareOptions& opts = {});

}  // namespace olsaudit
