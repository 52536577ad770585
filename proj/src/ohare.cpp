#include "olsaudit/ohare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace olsaudit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDenomGuard = 1e-9;

std::vector<double> desc_cumsum(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  std::vector<double> out(v.size() + 1, 0.0);
  for (size_t i = 0; i < v.size(); ++i) out[i + 1] = out[i] + v[i];
  return out;
}

std::vector<double> asc_cumsum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out(v.size() + 1, 0.0);
  for (size_t i = 0; i < v.size(); ++i) out[i + 1] = out[i] + v[i];
  return out;
}

}  // namespace

Buckets Buckets::build(const std::vector<int>& assignment, const Eigen::VectorXd& weights) {
  const Eigen::Index n = Eigen::Index(assignment.size());
  if (weights.size() > 0 && weights.size() != n) {
    throw DimensionMismatchError("weights length does not match assignment");
  }
  Buckets b;
  b.assignment = assignment;
  for (int j : assignment) {
    if (j < 0) throw InvalidPartitionError("negative bucket id");
    b.m = std::max(b.m, j + 1);
  }
  b.members.resize(size_t(b.m));
  for (Eigen::Index i = 0; i < n; ++i) b.members[size_t(assignment[size_t(i)])].push_back(int(i));
  for (int j = 0; j < b.m; ++j) {
    if (b.members[size_t(j)].empty()) {
      throw InvalidPartitionError("bucket " + std::to_string(j) + " has no samples");
    }
  }
  b.u.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    b.u[i] = weights.size() > 0 ? std::sqrt(weights[i]) : 1.0;
  }
  for (int j = 0; j < b.m; ++j) {
    double norm2 = 0.0;
    for (int i : b.members[size_t(j)]) norm2 += b.u[i] * b.u[i];
    const double inv = 1.0 / std::sqrt(norm2);
    for (int i : b.members[size_t(j)]) b.u[i] *= inv;
  }
  return b;
}

ReaveragedRegression reaverage(const RegressionData& data, const Buckets& buckets,
                               const Eigen::VectorXd& e) {
  data.validate();
  if (buckets.n() != data.n()) throw DimensionMismatchError("buckets do not match data");
  if (e.size() != data.d()) {
    throw DataError("direction must be supported on the continuous coordinates only");
  }

  // Fold the regression weights, then project out each bucket's u-component.
  Eigen::MatrixXd Xs = data.X;
  Eigen::VectorXd Ys = data.Y;
  if (data.weighted()) {
    Eigen::ArrayXd s = data.weights.array().sqrt();
    Xs.array().colwise() *= s;
    Ys.array() *= s;
  }

  ReaveragedRegression out;
  out.Xt = Xs;
  out.Yt = Ys;
  out.bucket_feature_proj.resize(buckets.m, data.d());
  out.bucket_label_proj.resize(buckets.m);
  for (int j = 0; j < buckets.m; ++j) {
    Eigen::RowVectorXd fx = Eigen::RowVectorXd::Zero(data.d());
    double fy = 0.0;
    for (int i : buckets.members[size_t(j)]) {
      fx += buckets.u[i] * Xs.row(i);
      fy += buckets.u[i] * Ys[i];
    }
    out.bucket_feature_proj.row(j) = fx;
    out.bucket_label_proj[j] = fy;
    for (int i : buckets.members[size_t(j)]) {
      out.Xt.row(i) -= buckets.u[i] * fx;
      out.Yt[i] -= buckets.u[i] * fy;
    }
  }
  return out;
}

BucketFirstOrderTables bucket_first_order_tables(const Eigen::VectorXd& R,
                                                 const Eigen::VectorXd& Z,
                                                 const Buckets& buckets) {
  if (R.size() != buckets.n() || Z.size() != buckets.n()) {
    throw DimensionMismatchError("R/Z do not match bucket assignment");
  }
  BucketFirstOrderTables t;
  const size_t m = size_t(buckets.m);
  t.d.resize(m);
  t.sum_r_max.resize(m);
  t.sum_r_min.resize(m);
  t.sum_z_max.resize(m);
  t.sum_z_min.resize(m);
  t.c_plus.resize(m);
  t.c_minus.resize(m);

  for (int j = 0; j < buckets.m; ++j) {
    const auto& mem = buckets.members[size_t(j)];
    std::vector<double> rz, ru, zu;
    for (int i : mem) {
      rz.push_back(R[i] * Z[i]);
      ru.push_back(R[i] * buckets.u[i]);
      zu.push_back(Z[i] * buckets.u[i]);
    }
    t.d[size_t(j)] = desc_cumsum(rz);
    t.sum_r_max[size_t(j)] = desc_cumsum(ru);
    t.sum_r_min[size_t(j)] = asc_cumsum(ru);
    t.sum_z_max[size_t(j)] = desc_cumsum(zu);
    t.sum_z_min[size_t(j)] = asc_cumsum(zu);

    const size_t nj = mem.size();
    auto& cp = t.c_plus[size_t(j)];
    auto& cm = t.c_minus[size_t(j)];
    cp.assign(nj + 1, 0.0);
    cm.assign(nj + 1, 0.0);
    for (size_t k = 1; k <= nj; ++k) {
      // The true (sum R u, sum Z u) pair lies in the box spanned by the four
      // extreme products; the product of the pair is extremal at a corner.
      const double rmax = t.sum_r_max[size_t(j)][k], rmin = t.sum_r_min[size_t(j)][k];
      const double zmax = t.sum_z_max[size_t(j)][k], zmin = t.sum_z_min[size_t(j)][k];
      const double corners[4] = {rmax * zmax, rmax * zmin, rmin * zmax, rmin * zmin};
      cp[k] = *std::max_element(corners, corners + 4);
      cm[k] = *std::min_element(corners, corners + 4);
    }
  }
  return t;
}

BucketHigherOrderTables bucket_higher_order_tables(const NormalizedRegression& norm,
                                                   const Buckets& buckets,
                                                   MsnBackend per_bucket_backend) {
  if (norm.n() != buckets.n()) throw DimensionMismatchError("norm does not match buckets");
  BucketHigherOrderTables t;
  const size_t m = size_t(buckets.m);
  t.M.resize(m);
  t.Ubar.resize(m);
  t.rho.resize(m);
  t.zeta.resize(m);

  for (int j = 0; j < buckets.m; ++j) {
    const auto& mem = buckets.members[size_t(j)];
    const int nj = int(mem.size());

    // Gram matrix of {Xn_i * u_i : i in B_j}.
    Eigen::MatrixXd rows(nj, norm.d());
    for (int a = 0; a < nj; ++a) rows.row(a) = buckets.u[mem[size_t(a)]] * norm.Xn.row(mem[size_t(a)]);
    Eigen::MatrixXd H = rows * rows.transpose();
    MsnBoundVector raw = per_bucket_backend == MsnBackend::Rti ? rti_bound(H) : spectral_bound(H);

    // sum_{i in B_j} Xn_i u_i = 0 after reaveraging, so a size-k removal has
    // the same sum norm as its size-(n_j - k) complement.
    std::vector<double> M(size_t(nj) + 1, 0.0);
    for (int k = 0; k <= nj; ++k) {
      const double a = k == 0 ? 0.0 : raw[k];
      const double b = (nj - k) == 0 ? 0.0 : raw[nj - k];
      M[size_t(k)] = std::min(a, b);
    }
    t.M[size_t(j)] = std::move(M);

    std::vector<double> u2, ru, zu;
    for (int i : mem) {
      u2.push_back(buckets.u[i] * buckets.u[i]);
      ru.push_back(std::abs(norm.R[i] * buckets.u[i]));
      zu.push_back(std::abs(norm.Z[i] * buckets.u[i]));
    }
    std::vector<double> mass = desc_cumsum(u2);
    std::vector<double> ubar(size_t(nj) + 1, 0.0);
    for (int k = 0; k <= nj; ++k) ubar[size_t(k)] = std::clamp(1.0 - mass[size_t(k)], 0.0, 1.0);
    ubar[size_t(nj)] = 0.0;
    t.Ubar[size_t(j)] = std::move(ubar);

    std::vector<double> rho_raw = desc_cumsum(ru);
    std::vector<double> zeta_raw = desc_cumsum(zu);
    std::vector<double> rho(size_t(nj) + 1, 0.0), zeta(size_t(nj) + 1, 0.0);
    for (int k = 0; k <= nj; ++k) {
      rho[size_t(k)] = std::min(rho_raw[size_t(k)], rho_raw[size_t(nj - k)]);
      zeta[size_t(k)] = std::min(zeta_raw[size_t(k)], zeta_raw[size_t(nj - k)]);
    }
    t.rho[size_t(j)] = std::move(rho);
    t.zeta[size_t(j)] = std::move(zeta);
  }
  return t;
}

namespace {

void check_tables(const std::vector<std::vector<double>>& tables, int k_max) {
  long total = 0;
  for (const auto& g : tables) {
    if (g.empty() || g[0] != 0.0) throw DataError("bucket score table must start with 0");
    total += long(g.size()) - 1;
  }
  if (k_max > total) {
    throw BudgetExceedsTotalError("k_max=" + std::to_string(k_max) + " but only " +
                                  std::to_string(total) + " samples exist");
  }
}

}  // namespace

std::vector<double> dp_knapsack_1d(const std::vector<std::vector<double>>& tables, int k_max) {
  check_tables(tables, k_max);
  std::vector<double> F(size_t(k_max) + 1, -kInf);
  F[0] = 0.0;
  for (const auto& g : tables) {
    std::vector<double> next = F;  // the k_j = 0 branch
    const int nj = int(g.size()) - 1;
    for (int k = 1; k <= k_max; ++k) {
      for (int dk = 1; dk <= std::min(nj, k); ++dk) {
        if (std::isfinite(F[size_t(k - dk)])) {
          next[size_t(k)] = std::max(next[size_t(k)], F[size_t(k - dk)] + g[size_t(dk)]);
        }
      }
    }
    F = std::move(next);
  }
  return F;
}

DpTable2d dp_knapsack_2d(const std::vector<std::vector<double>>& tables, int u_max, int k_max) {
  check_tables(tables, 0);
  if (k_max < 0 || u_max < 0) throw DataError("negative DP budget");
  DpTable2d out;
  out.F = Eigen::MatrixXd::Constant(u_max + 1, k_max + 1, -kInf);
  out.F(0, 0) = 0.0;
  for (const auto& g : tables) {
    Eigen::MatrixXd next = out.F;  // skip this bucket
    const int nj = int(g.size()) - 1;
    for (int u = 1; u <= u_max; ++u) {
      for (int k = 1; k <= k_max; ++k) {
        double best = next(u, k);
        for (int dk = 1; dk <= std::min(nj, k); ++dk) {
          const double prev = out.F(u - 1, k - dk);
          if (std::isfinite(prev)) best = std::max(best, prev + g[size_t(dk)]);
        }
        next(u, k) = best;
      }
    }
    out.F = std::move(next);
  }
  return out;
}

RemovalBounds ohare_bounds(const NormalizedRegression& norm, const Buckets& buckets,
                           const OhareOptions& opts) {
  const Eigen::Index n = norm.n();
  const int m = buckets.m;
  if (buckets.n() != n) throw DimensionMismatchError("buckets do not match regression");

  // The symmetry refinements lean on the per-bucket zero sums; a gross
  // violation means the caller skipped reaveraging.
  for (int j = 0; j < m; ++j) {
    Eigen::RowVectorXd s = Eigen::RowVectorXd::Zero(norm.d());
    for (int i : buckets.members[size_t(j)]) s += buckets.u[i] * norm.Xn.row(i);
    if (s.cwiseAbs().maxCoeff() > 1e-6) {
      throw NumericalError("bucket " + std::to_string(j) +
                           " is not reaveraged (nonzero weighted sum)");
    }
  }

  const int k_max = opts.k_max < 0 ? default_k_max(n, norm.d() + m) : opts.k_max;
  const int u_max = std::min(m, std::max(1, k_max));

  BucketFirstOrderTables fo = bucket_first_order_tables(norm.R, norm.Z, buckets);
  BucketHigherOrderTables ho = bucket_higher_order_tables(norm, buckets, opts.per_bucket_backend);

  // Per-bucket first-order score tables. The reaveraging correction divides
  // by the retained weight mass only when that is the conservative side; at
  // k_j = n_j the bucket is gone and no reaveraging effect exists.
  std::vector<std::vector<double>> up(static_cast<size_t>(m)), dn(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    const int nj = buckets.size(j);
    up[size_t(j)].assign(size_t(nj) + 1, 0.0);
    dn[size_t(j)].assign(size_t(nj) + 1, 0.0);
    for (int k = 1; k <= nj; ++k) {
      const double dk = fo.d[size_t(j)][size_t(k)];
      if (k == nj) {
        up[size_t(j)][size_t(k)] = dk;
        dn[size_t(j)][size_t(k)] = dk;
        continue;
      }
      const double ub = ho.Ubar[size_t(j)][size_t(k)];
      const double cp = fo.c_plus[size_t(j)][size_t(k)];
      const double cm = fo.c_minus[size_t(j)][size_t(k)];
      up[size_t(j)][size_t(k)] = dk + (cp >= 0.0 ? cp / ub : cp);
      dn[size_t(j)][size_t(k)] = dk + (cm <= 0.0 ? cm / ub : cm);
    }
  }
  std::vector<double> influences_up = dp_knapsack_1d(up, k_max);
  std::vector<double> influences_dn = dp_knapsack_1d(dn, k_max);

  // Indirect (reaveraging) contributions to the higher-order envelope.
  std::vector<std::vector<double>> g_cs(static_cast<size_t>(m)), g_xr(static_cast<size_t>(m)), g_xz(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    const int nj = buckets.size(j);
    g_cs[size_t(j)].assign(size_t(nj) + 1, 0.0);
    g_xr[size_t(j)].assign(size_t(nj) + 1, 0.0);
    g_xz[size_t(j)].assign(size_t(nj) + 1, 0.0);
    for (int k = 1; k < nj; ++k) {
      const double M = ho.M[size_t(j)][size_t(k)];
      const double ub = ho.Ubar[size_t(j)][size_t(k)];
      g_cs[size_t(j)][size_t(k)] = M * M / ub;
      g_xr[size_t(j)][size_t(k)] = M * ho.rho[size_t(j)][size_t(k)] / ub;
      g_xz[size_t(j)][size_t(k)] = M * ho.zeta[size_t(j)][size_t(k)] / ub;
    }
    // k = n_j: the whole bucket is removed, M(n_j) = 0 and there is nothing
    // left to reaverage, so all indirect terms vanish.
  }
  DpTable2d ind_cs = dp_knapsack_2d(g_cs, u_max, k_max);
  DpTable2d ind_xr = dp_knapsack_2d(g_xr, u_max, k_max);
  DpTable2d ind_xz = dp_knapsack_2d(g_xz, u_max, k_max);

  GramSet grams = compute_grams(norm);
  MsnBoundMatrix dir_cs = ku_triangle_bound(grams.G_XX, buckets.assignment, u_max, k_max);
  MsnBoundMatrix dir_xr = ku_triangle_bound(grams.G_XR, buckets.assignment, u_max, k_max);
  MsnBoundMatrix dir_xz = ku_triangle_bound(grams.G_XZ, buckets.assignment, u_max, k_max);

  RemovalBounds out;
  out.units = BoundUnits::Normalized;
  out.first_order = influences_up;
  out.L.assign(size_t(k_max) + 1, 0.0);
  out.U.assign(size_t(k_max) + 1, 0.0);
  out.certified_up_to = k_max;

  for (int k = 1; k <= k_max; ++k) {
    double err = 0.0;
    bool vacuous = k > out.certified_up_to;
    bool any_u = false;
    // A removal set of size k touching exactly u buckets is bounded by the
    // (u, k) entry of every table; the true u is unknown, so we take the max
    // over feasible u, and if any feasible u fails to certify a nonsingular
    // covariance the bound for this k is vacuous.
    for (int u = 1; u <= std::min(u_max, k) && !vacuous; ++u) {
      if (!ind_cs.feasible(u, k)) continue;  // no partition uses exactly u buckets
      any_u = true;
      // dir_cs bounds ||Sigma_T||_F >= lambda_max(Sigma_T); ind_cs bounds the
      // largest eigenvalue of the rank-one reaveraging corrections.
      const double cs = dir_cs.at(u, k) + ind_cs.at(u, k);
      const double denom = 1.0 - cs;
      if (denom <= kDenomGuard) {
        vacuous = true;
        break;
      }
      const double xr = dir_xr.at(u, k) + ind_xr.at(u, k);
      const double xz = dir_xz.at(u, k) + ind_xz.at(u, k);
      err = std::max(err, xr * xz / denom);
    }
    if (!any_u) vacuous = true;
    if (vacuous) {
      out.certified_up_to = std::min(out.certified_up_to, k - 1);
      out.U[size_t(k)] = kInf;
      out.L[size_t(k)] = -kInf;
    } else {
      out.U[size_t(k)] = influences_up[size_t(k)] + err;
      out.L[size_t(k)] = influences_dn[size_t(k)] - err;
    }
  }
  if (opts.units == BoundUnits::Original) return out.to_original(norm.e_scale);
  return out;
}

OhareAudit run_ohare(const RegressionData& data, const Buckets& buckets,
                     const Eigen::VectorXd& e, const OhareOptions& opts) {
  OhareAudit audit;
  audit.reavg = reaverage(data, buckets, e);
  RegressionData reavg_data{audit.reavg.Xt, audit.reavg.Yt, Eigen::VectorXd()};
  audit.fit = fit_ols(reavg_data);
  audit.norm = normalize(audit.fit, reavg_data, e);
  audit.bounds = ohare_bounds(audit.norm, buckets, opts);
  return audit;
}

}  // namespace olsaudit
