#include "olsaudit/regression_core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <limits>

namespace olsaudit {

void RegressionData::validate() const {
  if (Y.size() != X.rows()) {
    throw DimensionMismatchError("X has " + std::to_string(X.rows()) + " rows but Y has " +
                                 std::to_string(Y.size()) + " entries");
  }
  if (weights.size() > 0 && weights.size() != X.rows()) {
    throw DimensionMismatchError("weight vector length does not match sample count");
  }
  if (X.rows() < X.cols() + 1) {
    throw DataError("need n >= d + 1 samples, got n=" + std::to_string(X.rows()) +
                    " d=" + std::to_string(X.cols()));
  }
  if (!X.allFinite() || !Y.allFinite()) {
    throw DataError("non-finite entry in regression data");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw DataError("weights must be strictly positive and finite");
    }
  }
}

namespace {

// Applies the sqrt(w) row scaling that reduces weighted OLS to the
// unweighted pipeline.
void scaled_design(const RegressionData& data, Eigen::MatrixXd& Xs, Eigen::VectorXd& Ys) {
  Xs = data.X;
  Ys = data.Y;
  if (data.weighted()) {
    Eigen::ArrayXd s = data.weights.array().sqrt();
    Xs.array().colwise() *= s;
    Ys.array() *= s;
  }
}

struct SigmaEig {
  Eigen::MatrixXd Q;
  Eigen::VectorXd lambda;  // ascending
};

SigmaEig eig_or_throw(const Eigen::MatrixXd& Sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sigma);
  if (es.info() != Eigen::Success) {
    throw EigenFailureError("selfadjoint solver did not converge on Sigma");
  }
  return {es.eigenvectors(), es.eigenvalues()};
}

void check_condition(const Eigen::VectorXd& lambda) {
  double lmax = lambda[lambda.size() - 1];
  double lmin = lambda[0];
  if (!(lmin > 0.0) || lmax / lmin > kRankCondThreshold) {
    throw RankDeficientError("cond(Sigma) exceeds " + std::to_string(kRankCondThreshold) +
                             " (collinear features?)");
  }
}

OlsFit fit_scaled(const Eigen::MatrixXd& Xs, const Eigen::VectorXd& Ys) {
  OlsFit fit;
  fit.Sigma = Xs.transpose() * Xs;
  fit.Sigma = 0.5 * (fit.Sigma + fit.Sigma.transpose()).eval();  // enforce symmetry
  SigmaEig eg = eig_or_throw(fit.Sigma);
  check_condition(eg.lambda);
  Eigen::VectorXd xty = Xs.transpose() * Ys;
  fit.beta = eg.Q * (eg.lambda.array().inverse() * (eg.Q.transpose() * xty).array()).matrix();
  fit.residuals = Ys - Xs * fit.beta;
  fit.dof = Xs.rows() - Xs.cols();
  fit.sigma_hat = fit.dof > 0 ? fit.residuals.norm() / std::sqrt(double(fit.dof)) : 0.0;
  return fit;
}

}  // namespace

OlsFit fit_ols(const RegressionData& data) {
  data.validate();
  Eigen::MatrixXd Xs;
  Eigen::VectorXd Ys;
  scaled_design(data, Xs, Ys);
  return fit_scaled(Xs, Ys);
}

NormalizedRegression normalize(const OlsFit& fit, const RegressionData& data,
                               const Eigen::VectorXd& e) {
  if (e.size() != fit.Sigma.rows()) {
    throw DimensionMismatchError("direction length does not match covariate count");
  }
  if (e.norm() == 0.0) throw ZeroDirectionError();

  Eigen::MatrixXd Xs;
  Eigen::VectorXd Ys;
  scaled_design(data, Xs, Ys);

  SigmaEig eg = eig_or_throw(fit.Sigma);
  check_condition(eg.lambda);
  Eigen::ArrayXd inv_sqrt = eg.lambda.array().rsqrt();
  Eigen::MatrixXd W = eg.Q * inv_sqrt.matrix().asDiagonal() * eg.Q.transpose();  // Sigma^{-1/2}

  NormalizedRegression norm;
  norm.Xn = Xs * W;
  norm.R = fit.residuals;
  Eigen::VectorXd we = W * e;
  norm.e_scale = we.norm();
  if (norm.e_scale == 0.0) throw ZeroDirectionError();
  norm.e_n = we / norm.e_scale;
  norm.Z = norm.Xn * norm.e_n;

  double whiten_err = (norm.Xn.transpose() * norm.Xn - Eigen::MatrixXd::Identity(norm.d(), norm.d()))
                          .cwiseAbs()
                          .maxCoeff();
  if (whiten_err > 1e-8) {
    throw NumericalError("whitening failed: ||Xn^T Xn - I||_max = " + std::to_string(whiten_err));
  }
  return norm;
}

GramSet compute_grams(const NormalizedRegression& norm) {
  GramSet g;
  const Eigen::Index n = norm.n();
  try {
    g.G_X.noalias() = norm.Xn * norm.Xn.transpose();
    g.G_XX = g.G_X.array().square();
    g.G_XR = norm.R.asDiagonal() * g.G_X * norm.R.asDiagonal();
    g.G_XZ = norm.Z.asDiagonal() * g.G_X * norm.Z.asDiagonal();
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate " + std::to_string(n) + "x" + std::to_string(n) +
                        " Gram matrices");
  }
  return g;
}

namespace {

RegressionData retained_data(const RegressionData& data, const std::vector<int>& removed) {
  std::vector<char> drop(data.n(), 0);
  for (int idx : removed) {
    if (idx < 0 || idx >= data.n()) throw DataError("removal index out of range");
    drop[idx] = 1;
  }
  Eigen::Index kept = data.n() - Eigen::Index(removed.size());
  RegressionData out;
  out.X.resize(kept, data.d());
  out.Y.resize(kept);
  if (data.weighted()) out.weights.resize(kept);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    if (drop[i]) continue;
    out.X.row(r) = data.X.row(i);
    out.Y[r] = data.Y[i];
    if (data.weighted()) out.weights[r] = data.weights[i];
    ++r;
  }
  return out;
}

}  // namespace

Eigen::VectorXd refit_without(const RegressionData& data, const std::vector<int>& removed) {
  // Allows retained == d rows (interpolating fit) so exact_delta can probe the
  // k = n - d boundary.
  if (data.n() - Eigen::Index(removed.size()) < data.d()) {
    throw DataError("too many removals for a well-posed refit");
  }
  RegressionData sub = retained_data(data, removed);
  Eigen::MatrixXd Xs;
  Eigen::VectorXd Ys;
  {
    Eigen::MatrixXd xs = sub.X;
    Eigen::VectorXd ys = sub.Y;
    if (sub.weighted()) {
      Eigen::ArrayXd s = sub.weights.array().sqrt();
      xs.array().colwise() *= s;
      ys.array() *= s;
    }
    Xs = std::move(xs);
    Ys = std::move(ys);
  }
  Eigen::MatrixXd Sigma = Xs.transpose() * Xs;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sigma);
  if (es.info() != Eigen::Success) throw EigenFailureError("refit eigensolver failed");
  double lmin = es.eigenvalues()[0];
  double lmax = es.eigenvalues()[es.eigenvalues().size() - 1];
  if (!(lmin > 0.0) || lmax / lmin > kRankCondThreshold) {
    throw RankDeficientError("retained design is singular");
  }
  Eigen::VectorXd xty = Xs.transpose() * Ys;
  return es.eigenvectors() *
         (es.eigenvalues().array().inverse() * (es.eigenvectors().transpose() * xty).array())
             .matrix();
}

std::optional<Eigen::VectorXd> try_refit_without(const RegressionData& data,
                                                 const std::vector<int>& removed) {
  try {
    return refit_without(data, removed);
  } catch (const RankDeficientError&) {
    return std::nullopt;
  }
}

double binomial_double(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

bool for_each_subset(int n, int k, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) return visit(idx);
  while (true) {
    if (!visit(idx)) return false;
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) return true;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double exact_delta(const RegressionData& data, const Eigen::VectorXd& e, int k) {
  data.validate();
  if (k == 0) return 0.0;
  if (k < 0 || k > data.n()) throw DataError("invalid removal count");
  if (binomial_double(int(data.n()), k) > 1e6) {
    throw CombinatorialBudgetError("C(" + std::to_string(data.n()) + "," + std::to_string(k) +
                                   ") > 1e6");
  }
  OlsFit fit = fit_ols(data);
  double base = fit.beta.dot(e);
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for_each_subset(int(data.n()), k, [&](const std::vector<int>& T) {
    auto beta_s = try_refit_without(data, T);
    if (beta_s) {
      any = true;
      best = std::max(best, base - beta_s->dot(e));
    }
    return true;
  });
  if (!any) return std::numeric_limits<double>::infinity();
  return best;
}

}  // namespace olsaudit
