#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "olsaudit/errors.hpp"

namespace olsaudit {

/// A linear regression instance: n samples of d covariates plus labels.
/// An empty `weights` vector means the regression is unweighted.
struct RegressionData {
  Eigen::MatrixXd X;        // n x d
  Eigen::VectorXd Y;        // n
  Eigen::VectorXd weights;  // n, strictly positive; size 0 when unweighted

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index d() const { return X.cols(); }
  bool weighted() const { return weights.size() > 0; }

  // Throws DataError / DimensionMismatchError on malformed input.
  void validate() const;
};

struct OlsFit {
  Eigen::VectorXd beta;       // d
  Eigen::MatrixXd Sigma;      // d x d, X^T X in the sqrt(w)-scaled space
  Eigen::VectorXd residuals;  // n, in the scaled space
  Eigen::Index dof = 0;       // n - d
  double sigma_hat = 0.0;     // ||R|| / sqrt(n - d)
};

/// Whitened regression: Xn^T Xn = I, direction mapped consistently so that
/// <beta_S, e> on the raw data equals e_scale * (normalized-space value)
/// for every retained subset S.
struct NormalizedRegression {
  Eigen::MatrixXd Xn;  // n x d with Xn^T Xn = I
  Eigen::VectorXd R;   // residuals (unchanged by whitening)
  Eigen::VectorXd Z;   // Xn * e_n
  Eigen::VectorXd e_n; // unit-norm whitened direction
  double e_scale = 1.0;

  Eigen::Index n() const { return Xn.rows(); }
  Eigen::Index d() const { return Xn.cols(); }
};

/// The four Gram matrices driving the MSN bounds. Together these are the
/// dominant memory cost (4 dense n x n doubles).
struct GramSet {
  Eigen::MatrixXd G_X;   // Xn Xn^T
  Eigen::MatrixXd G_XX;  // entrywise square of G_X
  Eigen::MatrixXd G_XR;  // diag(R) G_X diag(R)
  Eigen::MatrixXd G_XZ;  // diag(Z) G_X diag(Z)

  Eigen::Index n() const { return G_X.rows(); }
};

// Condition-number threshold above which Sigma is treated as singular.
inline constexpr double kRankCondThreshold = 1e12;

/// OLS fit via symmetric eigendecomposition of Sigma = X^T X.
/// Weights are folded in by scaling row i of X and Y_i by sqrt(w_i).
/// Throws RankDeficientError when cond(Sigma) exceeds kRankCondThreshold.
OlsFit fit_ols(const RegressionData& data);

/// Whitening through the symmetric inverse square root of Sigma.
NormalizedRegression normalize(const OlsFit& fit, const RegressionData& data,
                               const Eigen::VectorXd& e);

GramSet compute_grams(const NormalizedRegression& norm);

/// OLS coefficients after deleting the rows in `removed` (complement refit).
/// Throws RankDeficientError when the retained design is singular.
Eigen::VectorXd refit_without(const RegressionData& data, const std::vector<int>& removed);

/// Same as refit_without but reports singularity via nullopt instead of
/// throwing; singular retained designs are a legitimate outcome for
/// one-hot data.
std::optional<Eigen::VectorXd> try_refit_without(const RegressionData& data,
                                                 const std::vector<int>& removed);

/// Brute-force Delta_k(e): max over all |T| = k of <beta - beta_S, e>.
/// Subsets with a singular retained design are excluded from the max; when
/// every size-k subset is singular the result is +infinity.
/// Throws CombinatorialBudgetError when C(n, k) > 1e6.
double exact_delta(const RegressionData& data, const Eigen::VectorXd& e, int k);

/// Visits every size-k index subset of [0, n). Returns false (and stops
/// early) if the visitor returns false.
bool for_each_subset(int n, int k, const std::function<bool(const std::vector<int>&)>& visit);

double binomial_double(int n, int k);

}  // namespace olsaudit
