#include "olsaudit/acre.hpp"

#include <algorithm>
#include <cmath>

namespace olsaudit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// The envelope diverges once the Frobenius bound on Sigma_T reaches 1; the
// small margin keeps exactly-degenerate instances from slipping through as
// astronomically large finite bounds.
constexpr double kOneGuard = 1.0 - 1e-9;

struct BackendBounds {
  MsnBoundVector xx, xr, xz;
};

// b_k = M_XR(k) * M_XZ(k) / (1 - M_XX(k)), +inf once M_XX crosses 1.
std::vector<double> envelope_from(const BackendBounds& b, int k_max) {
  std::vector<double> env(size_t(k_max) + 1, 0.0);
  for (int k = 1; k <= k_max; ++k) {
    if (b.xx[k] >= kOneGuard) {
      env[size_t(k)] = kInf;
    } else {
      env[size_t(k)] = b.xr[k] * b.xz[k] / (1.0 - b.xx[k]);
    }
  }
  return env;
}

RemovalBounds assemble(const std::vector<double>& first_order,
                       const std::vector<std::vector<double>>& envelopes, int k_max,
                       BoundUnits units, double e_scale) {
  RemovalBounds out;
  out.units = BoundUnits::Normalized;
  out.first_order = first_order;
  out.L.assign(size_t(k_max) + 1, 0.0);
  out.U.assign(size_t(k_max) + 1, 0.0);
  out.certified_up_to = k_max;
  for (int k = 1; k <= k_max; ++k) {
    double b = kInf;
    for (const auto& env : envelopes) b = std::min(b, env[size_t(k)]);
    if (std::isinf(b) || k > out.certified_up_to) {
      out.certified_up_to = std::min(out.certified_up_to, k - 1);
      out.U[size_t(k)] = kInf;
      out.L[size_t(k)] = -kInf;
    } else {
      out.U[size_t(k)] = first_order[size_t(k)] + b;
      out.L[size_t(k)] = first_order[size_t(k)] - b;
    }
  }
  if (units == BoundUnits::Original) return out.to_original(e_scale);
  return out;
}

}  // namespace

std::string backend_name(MsnBackend b) {
  return b == MsnBackend::Rti ? "rti" : "spectral";
}

RemovalBounds RemovalBounds::to_original(double e_scale) const {
  RemovalBounds out = *this;
  if (out.units == BoundUnits::Original) return out;
  for (auto* arr : {&out.L, &out.U, &out.first_order}) {
    for (double& v : *arr) v *= e_scale;
  }
  out.units = BoundUnits::Original;
  return out;
}

int default_k_max(Eigen::Index n, Eigen::Index d) {
  return int(std::max<Eigen::Index>(0, std::min(n - d - 1, n / 2)));
}

std::vector<double> first_order_term(const Eigen::VectorXd& R, const Eigen::VectorXd& Z,
                                     int k_max) {
  if (R.size() != Z.size()) throw DimensionMismatchError("R and Z lengths differ");
  const int n = int(R.size());
  if (k_max < 0 || k_max > n) k_max = n;
  std::vector<double> prod(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) prod[size_t(i)] = R[i] * Z[i];
  std::sort(prod.begin(), prod.end(), std::greater<double>());
  std::vector<double> A(size_t(k_max) + 1, 0.0);
  for (int k = 1; k <= k_max; ++k) A[size_t(k)] = A[size_t(k - 1)] + prod[size_t(k - 1)];
  return A;
}

RemovalBounds acre_bounds(const NormalizedRegression& norm, const GramSet& grams,
                          const AcreOptions& opts) {
  if (grams.n() != norm.n()) throw DimensionMismatchError("grams do not match regression");
  if (opts.backends.empty()) throw ConfigError("at least one MSN backend required");
  const int k_max = opts.k_max < 0 ? default_k_max(norm.n(), norm.d()) : opts.k_max;

  std::vector<double> A = first_order_term(norm.R, norm.Z, k_max);
  std::vector<std::vector<double>> envelopes;
  for (MsnBackend b : opts.backends) {
    BackendBounds bb;
    if (b == MsnBackend::Rti) {
      bb.xx = rti_bound(grams.G_XX, k_max);
      bb.xr = rti_bound(grams.G_XR, k_max);
      bb.xz = rti_bound(grams.G_XZ, k_max);
    } else {
      bb.xx = spectral_bound(grams.G_XX, k_max);
      bb.xr = spectral_bound(grams.G_XR, k_max);
      bb.xz = spectral_bound(grams.G_XZ, k_max);
    }
    envelopes.push_back(envelope_from(bb, k_max));
  }
  return assemble(A, envelopes, k_max, opts.units, norm.e_scale);
}

RemovalBounds acre_bounds_streaming(const NormalizedRegression& norm, int k_max,
                                    BoundUnits units) {
  const Eigen::Index n = norm.n();
  if (k_max < 0) k_max = default_k_max(n, norm.d());

  std::vector<double> A = first_order_term(norm.R, norm.Z, k_max);
  auto base_row = [&](Eigen::Index i, Eigen::VectorXd& row) {
    row.noalias() = norm.Xn * norm.Xn.row(i).transpose();
  };
  BackendBounds bb;
  bb.xx = rti_bound_rows(
      n,
      [&](Eigen::Index i, Eigen::VectorXd& row) {
        base_row(i, row);
        row = row.array().square();
      },
      k_max);
  bb.xr = rti_bound_rows(
      n,
      [&](Eigen::Index i, Eigen::VectorXd& row) {
        base_row(i, row);
        row = norm.R[i] * row.cwiseProduct(norm.R);
      },
      k_max);
  bb.xz = rti_bound_rows(
      n,
      [&](Eigen::Index i, Eigen::VectorXd& row) {
        base_row(i, row);
        row = norm.Z[i] * row.cwiseProduct(norm.Z);
      },
      k_max);
  std::vector<std::vector<double>> envelopes{envelope_from(bb, k_max)};
  return assemble(A, envelopes, k_max, units, norm.e_scale);
}

Certificate certify(const RemovalBounds& bounds, double theta) {
  Certificate cert;
  cert.threshold = theta;
  int k = 0;
  while (k + 1 <= bounds.k_max() && bounds.U[size_t(k + 1)] <= theta) ++k;
  cert.certified_k_lower = k;
  return cert;
}

Certificate certify(const RemovalBounds& bounds, double theta, BoundUnits theta_units) {
  if (theta_units != bounds.units) {
    throw UnitMismatchError("threshold units do not match the bound units");
  }
  return certify(bounds, theta);
}

}  // namespace olsaudit
