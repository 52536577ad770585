#include "olsaudit/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace olsaudit {

namespace {

struct Workspace {
  Eigen::MatrixXd Xs;  // sqrt(w)-scaled design
  Eigen::VectorXd Ys;
};

Workspace scaled(const RegressionData& data) {
  Workspace w{data.X, data.Y};
  if (data.weighted()) {
    Eigen::ArrayXd s = data.weights.array().sqrt();
    w.Xs.array().colwise() *= s;
    w.Ys.array() *= s;
  }
  return w;
}

// Fit on the rows flagged alive; returns false when the retained design is
// singular.
bool fit_alive(const Workspace& w, const std::vector<char>& alive, Eigen::VectorXd& beta,
               Eigen::VectorXd& resid, Eigen::MatrixXd& sigma) {
  const Eigen::Index n = w.Xs.rows(), d = w.Xs.cols();
  sigma.setZero(d, d);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!alive[size_t(i)]) continue;
    sigma.noalias() += w.Xs.row(i).transpose() * w.Xs.row(i);
    xty.noalias() += w.Xs.row(i).transpose() * w.Ys[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  if (es.info() != Eigen::Success) return false;
  const double lmin = es.eigenvalues()[0];
  const double lmax = es.eigenvalues()[es.eigenvalues().size() - 1];
  if (!(lmin > 0.0) || lmax / lmin > kRankCondThreshold) return false;
  beta = es.eigenvectors() *
         (es.eigenvalues().array().inverse() * (es.eigenvectors().transpose() * xty).array())
             .matrix();
  resid = w.Ys - w.Xs * beta;
  return true;
}

}  // namespace

AttackResult amip_attack(const RegressionData& data, const Eigen::VectorXd& e, double theta,
                         const AttackOptions& opts) {
  data.validate();
  if (e.size() != data.d()) throw DimensionMismatchError("direction length != covariate count");

  const Eigen::Index n = data.n();
  Workspace w = scaled(data);
  std::vector<char> alive(size_t(n), 1);

  Eigen::VectorXd beta, resid;
  Eigen::MatrixXd sigma;
  if (!fit_alive(w, alive, beta, resid, sigma)) {
    throw RankDeficientError("full design is singular");
  }
  const double base = beta.dot(e);

  AttackResult res;
  if (0.0 >= theta) {  // the threshold is already met before any removal
    res.k_found = 0;
    return res;
  }

  int budget = opts.max_removals < 0 ? int(n - data.d() - 1) : opts.max_removals;
  budget = std::min(budget, int(n - data.d()));

  // Non-adaptive ordering: influence scores from the full fit.
  std::vector<int> order;
  if (!opts.adaptive) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    Eigen::VectorXd q = es.eigenvectors() *
                        (es.eigenvalues().array().inverse() *
                         (es.eigenvectors().transpose() * e).array())
                            .matrix();  // Sigma^{-1} e
    std::vector<std::pair<double, int>> scored(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      scored[size_t(i)] = {resid[i] * w.Xs.row(i).dot(q), int(i)};
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    order.reserve(size_t(n));
    for (const auto& [s, i] : scored) order.push_back(i);
  }

  for (int step = 0; step < budget; ++step) {
    int pick = -1;
    if (opts.adaptive) {
      // Re-rank with the refreshed residuals and covariance.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
      if (es.info() != Eigen::Success || !(es.eigenvalues()[0] > 0.0)) {
        res.singular_stop = true;
        break;
      }
      Eigen::VectorXd q = es.eigenvectors() *
                          (es.eigenvalues().array().inverse() *
                           (es.eigenvectors().transpose() * e).array())
                              .matrix();
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!alive[size_t(i)]) continue;
        const double score = resid[i] * w.Xs.row(i).dot(q);
        if (score > best) {
          best = score;
          pick = int(i);
        }
      }
    } else {
      pick = order[size_t(step)];
    }
    if (pick < 0) break;
    alive[size_t(pick)] = 0;
    res.removal_order.push_back(pick);

    if (!fit_alive(w, alive, beta, resid, sigma)) {
      res.singular_stop = true;
      res.removal_order.pop_back();
      break;
    }
    const double shift = base - beta.dot(e);
    res.achieved_shift.push_back(shift);
    if (shift >= theta) {
      res.k_found = int(res.removal_order.size());
      break;
    }
  }
  return res;
}

}  // namespace olsaudit
