#include "olsaudit/datagen.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace olsaudit {

double Rng::uniform01() { return double(gen_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::uniform_pm1() { return 2.0 * uniform01() - 1.0; }

CovariateLaw covariate_law_from_string(const std::string& s) {
  if (s == "gaussian") return CovariateLaw::Gaussian;
  if (s == "sphere") return CovariateLaw::Sphere;
  if (s == "hypercube") return CovariateLaw::Hypercube;
  throw ConfigError("unknown covariate law: " + s);
}

std::string covariate_law_name(CovariateLaw law) {
  switch (law) {
    case CovariateLaw::Gaussian: return "gaussian";
    case CovariateLaw::Sphere: return "sphere";
    default: return "hypercube";
  }
}

void SyntheticSpec::validate_and_fill() {
  if (n <= 0 || d <= 0 || m <= 0) throw ConfigError("n, d, m must be positive");
  if (sigma < 0.0) throw ConfigError("sigma must be nonnegative");
  if (bucket_sizes.empty()) {
    bucket_sizes.assign(size_t(m), n / m);
    for (int j = 0; j < n % m; ++j) bucket_sizes[size_t(j)] += 1;
  }
  if (int(bucket_sizes.size()) != m) throw ConfigError("bucket_sizes length != m");
  long total = 0;
  for (int s : bucket_sizes) {
    if (s <= 0) throw ConfigError("bucket sizes must be positive");
    total += s;
  }
  if (total != n) throw ConfigError("bucket sizes must sum to n");
  if (beta_gt.size() == 0) beta_gt = Eigen::VectorXd::Ones(d);
  if (beta_gt.size() != d) throw ConfigError("beta_gt length != d");
  if (mu.size() == 0) mu = Eigen::VectorXd::Zero(m);
  if (mu.size() != m) throw ConfigError("mu length != m");
}

SyntheticData generate(SyntheticSpec spec) {
  spec.validate_and_fill();
  Rng rng(spec.seed);

  SyntheticData out;
  out.data.X.resize(spec.n, spec.d);
  out.data.Y.resize(spec.n);

  std::vector<int> assignment(size_t(spec.n));
  {
    int i = 0;
    for (int j = 0; j < spec.m; ++j) {
      for (int c = 0; c < spec.bucket_sizes[size_t(j)]; ++c) assignment[size_t(i++)] = j;
    }
  }

  for (int i = 0; i < spec.n; ++i) {
    Eigen::VectorXd x(spec.d);
    switch (spec.law) {
      case CovariateLaw::Gaussian:
        for (int c = 0; c < spec.d; ++c) x[c] = rng.normal();
        break;
      case CovariateLaw::Sphere: {
        do {
          for (int c = 0; c < spec.d; ++c) x[c] = rng.normal();
        } while (x.norm() == 0.0);
        x /= x.norm();
        break;
      }
      case CovariateLaw::Hypercube:
        for (int c = 0; c < spec.d; ++c) x[c] = rng.uniform_pm1();
        break;
    }
    out.data.X.row(i) = x;
    out.data.Y[i] = spec.mu[assignment[size_t(i)]] + x.dot(spec.beta_gt) +
                    (spec.sigma > 0.0 ? spec.sigma * rng.normal() : 0.0);
  }
  out.buckets = Buckets::build(assignment, Eigen::VectorXd());
  return out;
}

RegressionData make_brittle(const RegressionData& data, int column, const Eigen::VectorXd& gamma,
                            double c, std::uint64_t seed) {
  data.validate();
  const Eigen::Index n = data.n(), d = data.d();
  if (column < 0 || column >= d) throw ConfigError("designated column out of range");
  if (gamma.size() != d - 1) throw DimensionMismatchError("gamma must have length d - 1");
  if (!(c > 0.0)) throw ConfigError("perturbation budget must be positive");

  std::vector<int> S;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (data.X(i, column) == 0.0) S.push_back(int(i));
  }
  if (Eigen::Index(S.size()) <= d) {
    throw DataError("designated column must be zero on more than d samples");
  }
  const Eigen::Index ns = Eigen::Index(S.size());

  std::vector<int> others;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (j != column) others.push_back(int(j));
  }

  RegressionData out = data;
  Rng rng(seed);

  // Non-degeneracy: [X_{S,others} | Y_S] must span d dimensions so the
  // forced-fit residual is nonzero and outside the column span. Almost any
  // small perturbation achieves this; retry with fresh noise if unlucky.
  auto span_matrix = [&]() {
    Eigen::MatrixXd A(ns, d);
    for (Eigen::Index a = 0; a < ns; ++a) {
      for (size_t t = 0; t < others.size(); ++t) A(a, Eigen::Index(t)) = out.X(S[size_t(a)], others[t]);
      A(a, d - 1) = out.Y[S[size_t(a)]];
    }
    return A;
  };
  auto non_degenerate = [&]() {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(span_matrix());
    const auto& sv = svd.singularValues();
    return sv[sv.size() - 1] > 1e-10 * std::max(1.0, sv[0]);
  };

  for (int attempt = 0; attempt < 16 && !non_degenerate(); ++attempt) {
    Eigen::MatrixXd noise(ns, Eigen::Index(others.size()) + 1);
    for (Eigen::Index a = 0; a < noise.rows(); ++a) {
      for (Eigen::Index b = 0; b < noise.cols(); ++b) noise(a, b) = rng.normal();
    }
    noise *= (c / 4.0) / std::max(noise.norm(), 1e-300);
    for (Eigen::Index a = 0; a < ns; ++a) {
      for (size_t t = 0; t < others.size(); ++t) {
        out.X(S[size_t(a)], others[t]) = data.X(S[size_t(a)], others[t]) + noise(a, Eigen::Index(t));
      }
      out.Y[S[size_t(a)]] = data.Y[S[size_t(a)]] + noise(a, noise.cols() - 1);
    }
  }
  if (!non_degenerate()) {
    throw DegenerateUnfixableError("could not reach a non-degenerate configuration");
  }

  // Residual of the forced fit gamma on the retained rows; writing it into
  // the designated column makes (gamma, 2||R||/c) a perfect interpolation.
  Eigen::VectorXd R(ns);
  for (Eigen::Index a = 0; a < ns; ++a) {
    double pred = 0.0;
    for (size_t t = 0; t < others.size(); ++t) pred += out.X(S[size_t(a)], others[t]) * gamma[Eigen::Index(t)];
    R[a] = out.Y[S[size_t(a)]] - pred;
  }
  const double rn = R.norm();
  if (rn == 0.0) throw DegenerateUnfixableError("forced fit already interpolates");
  for (Eigen::Index a = 0; a < ns; ++a) {
    out.X(S[size_t(a)], column) = (c / (2.0 * rn)) * R[a];
  }
  return out;
}

}  // namespace olsaudit
