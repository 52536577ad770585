#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "olsaudit/msn_bounds.hpp"
#include "olsaudit/regression_core.hpp"

namespace olsaudit {

enum class BoundUnits { Normalized, Original };

enum class MsnBackend { Rti, Spectral };

std::string backend_name(MsnBackend b);

/// Per-k removal-effect bounds L[k] <= Delta_k(e) <= U[k].
/// Beyond certified_up_to the envelope is vacuous: U = +inf, L = -inf.
struct RemovalBounds {
  std::vector<double> L;
  std::vector<double> U;
  std::vector<double> first_order;
  int certified_up_to = 0;
  BoundUnits units = BoundUnits::Normalized;

  int k_max() const { return int(U.size()) - 1; }
  RemovalBounds to_original(double e_scale) const;
};

struct Certificate {
  double threshold = 0.0;
  int certified_k_lower = 0;
  std::optional<int> attack_k_upper;
};

struct AcreOptions {
  std::vector<MsnBackend> backends = {MsnBackend::Rti};
  int k_max = -1;  // < 0: min(n - d - 1, n / 2)
  BoundUnits units = BoundUnits::Original;
};

/// first_order[k] = sum of the k largest values of R_i * Z_i (descending
/// sort + cumulative sum); exact for the separable first-order objective.
std::vector<double> first_order_term(const Eigen::VectorXd& R, const Eigen::VectorXd& Z,
                                     int k_max);

/// The continuous-feature certification pipeline. The envelope is the per-k
/// minimum over the enabled backends (each is individually sound).
RemovalBounds acre_bounds(const NormalizedRegression& norm, const GramSet& grams,
                          const AcreOptions& opts = {});

/// RTI-only variant that builds Gram rows on the fly; never allocates an
/// n x n matrix. Used for large-n audits where the Gram set would not fit.
RemovalBounds acre_bounds_streaming(const NormalizedRegression& norm, int k_max = -1,
                                    BoundUnits units = BoundUnits::Original);

/// certified_k_lower = max { k : U_k' <= theta for all k' <= k }.
/// theta must be expressed in the same units as `bounds`.
Certificate certify(const RemovalBounds& bounds, double theta);

/// Variant that cross-checks the caller's expectation of the units.
Certificate certify(const RemovalBounds& bounds, double theta, BoundUnits theta_units);

int default_k_max(Eigen::Index n, Eigen::Index d);

}  // namespace olsaudit
