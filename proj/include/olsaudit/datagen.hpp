#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "olsaudit/ohare.hpp"
#include "olsaudit/regression_core.hpp"

namespace olsaudit {

enum class CovariateLaw { Gaussian, Sphere, Hypercube };

CovariateLaw covariate_law_from_string(const std::string& s);
std::string covariate_law_name(CovariateLaw law);

/// Deterministic PRNG stream used by all synthetic generation: mt19937_64
/// driving uniforms via the top 53 bits, normals via Box-Muller. Fixed here
/// (instead of std::normal_distribution) so seeded outputs are reproducible
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform01();             // [0, 1)
  double normal();                // N(0, 1)
  double uniform_pm1();           // [-1, 1)

 private:
  std::mt19937_64 gen_;
};

struct SyntheticSpec {
  int n = 0;
  int d = 0;
  int m = 1;
  std::vector<int> bucket_sizes;  // empty: near-equal split of n into m
  Eigen::VectorXd beta_gt;        // empty: ones(d)
  Eigen::VectorXd mu;             // empty: zeros(m)
  double sigma = 1.0;
  CovariateLaw law = CovariateLaw::Gaussian;
  std::uint64_t seed = 0;

  void validate_and_fill();  // throws ConfigError on inconsistent sizes
};

struct SyntheticData {
  RegressionData data;  // continuous features only
  Buckets buckets;
};

/// X_i iid per the covariate law; Y_i = mu_{b(i)} + <X_i, beta_gt> + N(0, sigma^2).
SyntheticData generate(SyntheticSpec spec);

/// The near-brittleness construction: given a column that is zero outside a
/// small bucket, nudge the remaining data within c/2 for non-degeneracy and
/// rewrite that column on the zero rows so that refitting on those rows alone
/// returns exactly `gamma` for the other coefficients (a perfect fit).
/// Total perturbation Frobenius norm stays below c.
RegressionData make_brittle(const RegressionData& data, int column, const Eigen::VectorXd& gamma,
                            double c, std::uint64_t seed);

}  // namespace olsaudit
