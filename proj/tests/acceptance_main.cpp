// Acceptance suite: runs every criterion end to end and prints one
// PASS/FAIL line each. Exits nonzero if any blocking criterion fails.
//
// Criterion 9 needs locally supplied benchmark CSVs and is non-blocking:
// it reports SKIP when the data is absent and never affects the exit code.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "olsaudit/acre.hpp"
#include "olsaudit/audit_runner.hpp"
#include "olsaudit/baselines.hpp"
#include "olsaudit/datagen.hpp"
#include "olsaudit/msn_bounds.hpp"
#include "olsaudit/ohare.hpp"
#include "olsaudit/report.hpp"
#include "oracles.hpp"

using namespace olsaudit;

namespace {

int g_failures = 0;

void report_line(int criterion, const std::string& name, bool pass, const std::string& detail,
                 double seconds, bool blocking = true) {
  std::printf("%s criterion %d: %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass && blocking) ++g_failures;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Instance {
  RegressionData data;    // continuous features only
  Buckets buckets;
  RegressionData full;    // continuous + dummy columns
  Eigen::VectorXd e;      // over continuous coordinates
  Eigen::VectorXd e_full; // zero-padded
  int d, m;
};

Instance make_instance(std::uint64_t seed) {
  std::mt19937_64 gen(seed * 2654435761u + 17);
  const int n = 8 + int(gen() % 7);   // [8, 14]
  const int d = 1 + int(gen() % 3);   // [1, 3]
  const int m = 1 + int(gen() % 3);   // [1, 3]

  SyntheticSpec spec;
  spec.n = n;
  spec.d = d;
  spec.m = m;
  spec.sigma = std::vector<double>{0.3, 1.0, 3.0}[gen() % 3];
  spec.law = std::vector<CovariateLaw>{CovariateLaw::Gaussian, CovariateLaw::Sphere,
                                       CovariateLaw::Hypercube}[gen() % 3];
  spec.mu = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < m; ++j) spec.mu[j] = double(int(gen() % 5)) - 2.0;
  spec.seed = seed;

  Instance inst;
  SyntheticData sd = generate(spec);
  inst.data = std::move(sd.data);
  inst.buckets = std::move(sd.buckets);
  inst.d = d;
  inst.m = m;

  inst.e = Eigen::VectorXd::Zero(d);
  if (seed % 3 == 0 && d > 1) {
    for (int c = 0; c < d; ++c) inst.e[c] = double(int(gen() % 9)) - 4.0;
    if (inst.e.norm() == 0.0) inst.e[0] = 1.0;
  } else {
    inst.e[0] = 1.0;
  }

  inst.full = inst.data;
  inst.full.X.conservativeResize(n, d + m);
  inst.full.X.rightCols(m).setZero();
  for (int i = 0; i < n; ++i) {
    inst.full.X(i, d + inst.buckets.assignment[size_t(i)]) = 1.0;
  }
  inst.e_full = Eigen::VectorXd::Zero(d + m);
  inst.e_full.head(d) = inst.e;
  return inst;
}

bool sandwich_ok(const RemovalBounds& b, int k, double delta, double tol, std::string& why) {
  if (b.L[size_t(k)] > delta + tol) {
    why = "L_" + std::to_string(k) + " = " + std::to_string(b.L[size_t(k)]) + " > delta = " +
          std::to_string(delta);
    return false;
  }
  if (b.U[size_t(k)] < delta - tol) {
    why = "U_" + std::to_string(k) + " = " + std::to_string(b.U[size_t(k)]) + " < delta = " +
          std::to_string(delta);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 1. Soundness: L_k <= exhaustive Delta_k <= U_k for ACRE (both backends)
//    and OHARE on 200 seeded random instances.
void criterion_soundness() {
  const double t0 = now_seconds();
  int checks = 0;
  bool pass = true;
  std::string detail;

  for (std::uint64_t seed = 1; seed <= 200 && pass; ++seed) {
    Instance inst = make_instance(seed);
    const int n = int(inst.data.n());
    const int D = inst.d + inst.m;
    const int k_hi = n - D - 1;
    if (k_hi < 1) continue;

    RemovalBounds acre_rti, acre_spec, ohare;
    try {
      OlsFit fit = fit_ols(inst.full);
      NormalizedRegression norm = normalize(fit, inst.full, inst.e_full);
      GramSet grams = compute_grams(norm);
      AcreOptions ar;
      ar.k_max = k_hi;
      ar.backends = {MsnBackend::Rti};
      acre_rti = acre_bounds(norm, grams, ar);
      ar.backends = {MsnBackend::Spectral};
      acre_spec = acre_bounds(norm, grams, ar);

      OhareOptions oo;
      oo.k_max = k_hi;
      ohare = run_ohare(inst.data, inst.buckets, inst.e, oo).bounds;
    } catch (const RankDeficientError&) {
      continue;  // a degenerate draw; not a soundness statement
    }

    for (int k = 1; k <= k_hi && pass; ++k) {
      auto delta = oracles::exact_delta(inst.data, &inst.buckets, inst.e, k);
      if (!delta) continue;
      ++checks;
      std::string why;
      if (!sandwich_ok(acre_rti, k, *delta, 1e-8, why)) {
        pass = false;
        detail = "seed " + std::to_string(seed) + " acre/rti: " + why;
      } else if (!sandwich_ok(acre_spec, k, *delta, 1e-8, why)) {
        pass = false;
        detail = "seed " + std::to_string(seed) + " acre/spectral: " + why;
      } else if (!sandwich_ok(ohare, k, *delta, 1e-8, why)) {
        pass = false;
        detail = "seed " + std::to_string(seed) + " ohare: " + why;
      }
    }
  }
  if (pass) detail = std::to_string(checks) + " (instance, k) sandwiches held";
  report_line(1, "soundness of ACRE and OHARE envelopes", pass, detail, now_seconds() - t0);
}

// ---------------------------------------------------------------------------
// 2. MSN sandwich and KU dominance on 200 random Gram matrices.
void criterion_msn_sandwich() {
  const double t0 = now_seconds();
  bool pass = true;
  std::string detail;
  int checks = 0;

  for (std::uint64_t seed = 1; seed <= 200 && pass; ++seed) {
    std::mt19937_64 gen(seed);
    const int n = 4 + int(gen() % 9);  // [4, 12]
    const int dim = 1 + int(gen() % 4);
    const int m = 1 + int(gen() % 3);
    Eigen::MatrixXd V(n, dim);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < dim; ++j) {
        V(i, j) = 2.0 * (double(gen() >> 11) * 0x1.0p-53) - 1.0;
      }
    }
    Eigen::MatrixXd G = V * V.transpose();

    MsnBoundVector rti = rti_bound(G);
    MsnBoundVector spec = spectral_bound(G);
    GreedyMsnResult greedy = greedy_lower_bound(G);
    for (int k = 1; k <= n && pass; ++k) {
      const double exact = oracles::exact_msn(G, k);
      const double lower = std::sqrt(std::max(0.0, greedy.L[size_t(k)]));
      const double upper = std::min(rti[k], spec[k]);
      ++checks;
      if (lower > exact + 1e-8 || exact > upper + 1e-8) {
        pass = false;
        detail = "seed " + std::to_string(seed) + " k=" + std::to_string(k) + ": " +
                 std::to_string(lower) + " <= " + std::to_string(exact) + " <= " +
                 std::to_string(upper) + " violated";
      }
    }
    if (!pass) break;

    std::vector<int> bucket_of(static_cast<size_t>(n));
    for (int j = 0; j < m; ++j) bucket_of[size_t(j)] = j;
    for (int i = m; i < n; ++i) bucket_of[size_t(i)] = int(gen() % std::uint64_t(m));
    MsnBoundMatrix ku = ku_triangle_bound(G, bucket_of, m, n);
    for (int u = 1; u <= m && pass; ++u) {
      for (int k = u; k <= n && pass; ++k) {
        const double exact = oracles::exact_msn_exact_u(G, bucket_of, u, k);
        if (std::isinf(exact)) continue;
        ++checks;
        if (!ku.feasible(u, k) || ku.at(u, k) < exact - 1e-8) {
          pass = false;
          detail = "seed " + std::to_string(seed) + " ku(" + std::to_string(u) + "," +
                   std::to_string(k) + ") below the constrained max";
        }
      }
    }
  }
  if (pass) detail = std::to_string(checks) + " sandwich/dominance checks held";
  report_line(2, "MSN sandwich and KU dominance", pass, detail, now_seconds() - t0);
}

// ---------------------------------------------------------------------------
// 3. Reaveraging equivalence: two-phase fit == continuous block of the full
//    dummy OLS, weighted and unweighted, 100 instances each side.
void criterion_reaveraging() {
  const double t0 = now_seconds();
  bool pass = true;
  std::string detail;
  double worst = 0.0;

  for (std::uint64_t seed = 1; seed <= 100 && pass; ++seed) {
    std::mt19937_64 gen(seed + 9000);
    SyntheticSpec spec;
    spec.n = 10 + int(gen() % 30);
    spec.d = 1 + int(gen() % 4);
    spec.m = 1 + int(gen() % 4);
    spec.sigma = 1.0;
    spec.seed = seed + 500;
    spec.mu = Eigen::VectorXd::Random(spec.m);
    SyntheticData sd = generate(spec);

    const bool weighted = seed % 2 == 0;
    if (weighted) {
      sd.data.weights.resize(spec.n);
      for (int i = 0; i < spec.n; ++i) {
        sd.data.weights[i] = 0.25 + 2.0 * (double(gen() >> 11) * 0x1.0p-53);
      }
      sd.buckets = Buckets::build(sd.buckets.assignment, sd.data.weights);
    }

    ReaveragedRegression r = reaverage(sd.data, sd.buckets, Eigen::VectorXd::Unit(spec.d, 0));
    RegressionData rd{r.Xt, r.Yt, Eigen::VectorXd()};
    OlsFit two_phase = fit_ols(rd);
    auto full = oracles::refit_continuous(sd.data, &sd.buckets, {});
    if (!full) {
      pass = false;
      detail = "seed " + std::to_string(seed) + ": full one-hot fit is singular";
      break;
    }
    const double err = (two_phase.beta - *full).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    if (err > 1e-8) {
      pass = false;
      detail = "seed " + std::to_string(seed) + ": coefficient discrepancy " +
               std::to_string(err);
    }
  }
  if (pass) detail = "max coefficient discrepancy " + std::to_string(worst);
  report_line(3, "reaveraging equals the full one-hot OLS", pass, detail, now_seconds() - t0);
}

// ---------------------------------------------------------------------------
// 4. DP exactness against exhaustive partition enumeration.
void criterion_dp_exactness() {
  const double t0 = now_seconds();
  bool pass = true;
  std::string detail;
  int checks = 0;
  std::mt19937_64 gen(424242);
  auto val = [&] { return (double(int(gen() % 2001)) - 1000.0) / 100.0; };

  for (int trial = 0; trial < 100 && pass; ++trial) {
    const int m = 1 + int(gen() % 4);
    std::vector<std::vector<double>> tables(static_cast<size_t>(m));
    int total = 0;
    for (auto& t : tables) {
      const int nj = 1 + int(gen() % 4);
      total += nj;
      t.assign(size_t(nj) + 1, 0.0);
      for (int k = 1; k <= nj; ++k) t[size_t(k)] = val();
    }
    const int k_max = std::min(10, total);
    std::vector<double> F1 = dp_knapsack_1d(tables, k_max);
    DpTable2d F2 = dp_knapsack_2d(tables, m, k_max);
    for (int k = 0; k <= k_max && pass; ++k) {
      ++checks;
      if (F1[size_t(k)] != oracles::partition_max_1d(tables, k)) {
        pass = false;
        detail = "1d mismatch at trial " + std::to_string(trial) + " k=" + std::to_string(k);
      }
      for (int u = 0; u <= m && pass; ++u) {
        const double oracle = oracles::partition_max_2d(tables, u, k);
        const bool feas = !std::isinf(oracle);
        ++checks;
        if (feas != F2.feasible(u, k) || (feas && F2.at(u, k) != oracle)) {
          pass = false;
          detail = "2d mismatch at trial " + std::to_string(trial) + " (u=" +
                   std::to_string(u) + ", k=" + std::to_string(k) + ")";
        }
      }
    }
  }
  if (pass) detail = std::to_string(checks) + " table entries exactly equal";
  report_line(4, "knapsack DP equals exhaustive enumeration", pass, detail, now_seconds() - t0);
}

// ---------------------------------------------------------------------------
// 5. Tightness trend at the Figure-2b scale: finite envelope up to sqrt(n)
//    and a shrinking U/L ratio when n doubles at fixed d.
void criterion_tightness_trend() {
  const double t0 = now_seconds();
  bool pass = true;
  std::string detail;

  auto ratio_at_sqrt_n = [&](int n, double& ratio, std::string& why) {
    SyntheticSpec spec;
    spec.n = n;
    spec.d = 50;
    spec.sigma = 1.0;
    spec.seed = 20240601;
    SyntheticData sd = generate(spec);
    const int k_hi = int(std::sqrt(double(n)));

    OlsFit fit = fit_ols(sd.data);
    NormalizedRegression norm = normalize(fit, sd.data, Eigen::VectorXd::Unit(50, 0));
    RemovalBounds b = acre_bounds_streaming(norm, k_hi);
    for (int k = 1; k <= k_hi; ++k) {
      if (!std::isfinite(b.U[size_t(k)])) {
        why = "n=" + std::to_string(n) + ": U_" + std::to_string(k) + " infinite";
        return false;
      }
    }
    ratio = b.U[size_t(k_hi)] / std::max(b.L[size_t(k_hi)], 1e-12);
    return true;
  };

  double r4000 = 0.0, r8000 = 0.0;
  std::string why;
  if (!ratio_at_sqrt_n(4000, r4000, why) || !ratio_at_sqrt_n(8000, r8000, why)) {
    pass = false;
    detail = why;
  } else if (!(r8000 < r4000)) {
    pass = false;
    detail = "ratio did not shrink: U/L(4000) = " + std::to_string(r4000) +
             ", U/L(8000) = " + std::to_string(r8000);
  } else {
    detail = "U/L at sqrt(n): " + std::to_string(r4000) + " (n=4000) -> " +
             std::to_string(r8000) + " (n=8000)";
  }
  const long mem = peak_memory_bytes();
  const bool mem_ok = mem <= (long(2) << 30);
  if (!mem_ok) {
    pass = false;
    detail += "; peak memory " + std::to_string(mem) + " bytes exceeds 2 GiB";
  } else {
    detail += "; peak memory " + std::to_string(mem >> 20) + " MiB";
  }
  report_line(5, "envelope tightness improves with n", pass, detail, now_seconds() - t0);
}

// ---------------------------------------------------------------------------
// 6. Brittleness: the planted near-zero-column construction flips with at
//    most bucket-size removals while the non-adaptive attack needs more.
void criterion_brittleness() {
  const double t0 = now_seconds();
  bool pass = true;
  std::string detail;

  SyntheticSpec spec;
  spec.n = 15;
  spec.d = 1;
  spec.sigma = 0.4;
  spec.seed = 56;
  RegressionData base = generate(spec).data;
  RegressionData data;
  data.X.resize(15, 2);
  data.X.col(0) = base.X.col(0);
  data.X.col(1).setZero();
  data.X(14, 1) = 1.0;  // one bucketed sample
  data.Y = base.Y;

  Eigen::VectorXd gamma(1);
  gamma << -0.4;
  RegressionData brittle = make_brittle(data, 1, gamma, 1e-3, 57);
  Eigen::VectorXd e = Eigen::VectorXd::Unit(2, 0);
  OlsFit fit = fit_ols(brittle);

  const int bucket_size = 1;
  const int k_sign = oracles::exact_k_theta(brittle, nullptr, e, fit.beta.dot(e), 4);
  if (k_sign < 0 || k_sign > bucket_size) {
    pass = false;
    detail = "exact k_sign = " + std::to_string(k_sign) + " exceeds the bucket size";
  } else {
    AttackResult amip = amip_attack(brittle, e, fit.beta.dot(e));
    if (!amip.k_found) {
      detail = "exact k_sign = " + std::to_string(k_sign) + "; amip never crossed";
    } else if (*amip.k_found <= k_sign) {
      pass = false;
      detail = "amip found the planted set (k_found = " + std::to_string(*amip.k_found) + ")";
    } else {
      detail = "exact k_sign = " + std::to_string(k_sign) +
               ", amip k_found = " + std::to_string(*amip.k_found);
    }
  }
  report_line(6, "planted brittleness evades the greedy attack", pass, detail,
              now_seconds() - t0);
}

// ---------------------------------------------------------------------------
// 7. Singularity handling: a bucket of size 3 caps ACRE at k < 3 while OHARE
//    certifies past it, with both envelopes verified against exhaustive
//    deltas.
void criterion_singularity() {
  const double t0 = now_seconds();
  bool pass = true;
  std::string detail;

  SyntheticData sd;
  {
    SyntheticSpec spec;
    spec.n = 24;
    spec.d = 1;
    spec.m = 2;
    spec.bucket_sizes = {3, 21};
    spec.mu = Eigen::VectorXd::Zero(2);
    spec.mu << 0.5, -0.5;
    spec.sigma = 0.25;
    spec.seed = 48;
    sd = generate(spec);
  }
  Eigen::VectorXd e = Eigen::VectorXd::Ones(1);

  RegressionData full = sd.data;
  full.X.conservativeResize(24, 3);
  full.X.col(1).setZero();
  full.X.col(2).setZero();
  for (int i = 0; i < 24; ++i) full.X(i, 1 + sd.buckets.assignment[size_t(i)]) = 1.0;
  Eigen::VectorXd e_full = Eigen::VectorXd::Zero(3);
  e_full[0] = 1.0;

  OlsFit fit = fit_ols(full);
  NormalizedRegression norm = normalize(fit, full, e_full);
  GramSet grams = compute_grams(norm);
  AcreOptions aopts;
  aopts.k_max = 5;
  RemovalBounds acre = acre_bounds(norm, grams, aopts);

  OhareOptions oopts;
  oopts.k_max = 5;
  RemovalBounds ohare = run_ohare(sd.data, sd.buckets, e, oopts).bounds;

  if (acre.certified_up_to >= 3) {
    pass = false;
    detail = "acre certified_up_to = " + std::to_string(acre.certified_up_to) +
             " despite the size-3 bucket";
  } else if (ohare.certified_up_to < 4 || !std::isfinite(ohare.U[4])) {
    pass = false;
    detail = "ohare certified_up_to = " + std::to_string(ohare.certified_up_to) +
             " did not pass the bucket size";
  } else {
    for (int k = 1; k <= 5 && pass; ++k) {
      auto delta = oracles::exact_delta(sd.data, &sd.buckets, e, k);
      if (!delta) continue;
      std::string why;
      if (!sandwich_ok(ohare, k, *delta, 1e-8, why)) {
        pass = false;
        detail = "ohare " + why;
      } else if (!sandwich_ok(acre, k, *delta, 1e-8, why)) {
        pass = false;
        detail = "acre " + why;
      }
    }
    if (pass) {
      detail = "acre certified " + std::to_string(acre.certified_up_to) +
               ", ohare certified " + std::to_string(ohare.certified_up_to) +
               " with finite U past the bucket";
    }
  }
  report_line(7, "one-hot singularities: OHARE outlives ACRE", pass, detail,
              now_seconds() - t0);
}

// ---------------------------------------------------------------------------
// 8. Scaling: certification time grows ~4x when n doubles at fixed d.
void criterion_scaling() {
  const double t0 = now_seconds();
  bool pass = true;
  std::string detail;

  auto audit_seconds = [&](int n) {
    SyntheticSpec spec;
    spec.n = n;
    spec.d = 10;
    spec.sigma = 1.0;
    spec.seed = 777;
    SyntheticData sd = generate(spec);
    Eigen::VectorXd e = Eigen::VectorXd::Unit(10, 0);

    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const double r0 = now_seconds();
      OlsFit fit = fit_ols(sd.data);
      NormalizedRegression norm_up = normalize(fit, sd.data, e);
      NormalizedRegression norm_dn = normalize(fit, sd.data, -e);
      GramSet grams = compute_grams(norm_up);
      AcreOptions opts;  // default k_max = n/2, full-Gram RTI
      RemovalBounds up = acre_bounds(norm_up, grams, opts);
      RemovalBounds dn = acre_bounds(norm_dn, grams, opts);
      (void)up;
      (void)dn;
      best = std::min(best, now_seconds() - r0);
    }
    return best;
  };

  const double t1000 = audit_seconds(1000);
  const double t2000 = audit_seconds(2000);
  const double t4000 = audit_seconds(4000);
  const double r1 = t2000 / t1000;
  const double r2 = t4000 / t2000;
  if (!(r1 >= 3.0 && r1 <= 6.0 && r2 >= 3.0 && r2 <= 6.0)) {
    pass = false;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "t(1000)=%.3fs t(2000)=%.3fs t(4000)=%.3fs ratios %.2f, %.2f",
                t1000, t2000, t4000, r1, r2);
  detail = buf;
  report_line(8, "audit time scales like n^2", pass, detail, now_seconds() - t0);
}

// ---------------------------------------------------------------------------
// 9. Optional benchmark datasets (non-blocking): run any configs found under
//    $OLSAUDIT_BENCHMARK_DIR and check the documented target sandwiches.
void criterion_benchmarks() {
  const double t0 = now_seconds();
  const char* dir = std::getenv("OLSAUDIT_BENCHMARK_DIR");
  if (dir == nullptr || !std::filesystem::is_directory(dir)) {
    std::printf(
        "SKIP criterion 9: benchmark datasets not supplied "
        "(set OLSAUDIT_BENCHMARK_DIR; non-blocking)\n");
    return;
  }
  bool pass = true;
  std::string detail;
  int ran = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json" && entry.path().extension() != ".toml") continue;
    try {
      AuditConfig cfg = load_config_file(entry.path().string());
      AuditReport report = run_audit(cfg);
      ++ran;
      for (const auto& r : report.regressions) {
        const std::string id = entry.path().stem().string() + "/" + r.name;
        std::printf("  benchmark %s: k_sign_lower=%s amip=%s\n", id.c_str(),
                    r.k_sign_lower ? std::to_string(*r.k_sign_lower).c_str() : "-",
                    r.amip && r.amip->k_found ? std::to_string(*r.amip->k_found).c_str() : "-");
        if (entry.path().stem().string().find("nightlights") != std::string::npos) {
          if (!r.k_sign_lower || *r.k_sign_lower < 20) {
            pass = false;
            detail = id + ": lower bound below 20";
          }
          if (r.amip && r.amip->k_found && *r.amip->k_found > 150) {
            pass = false;
            detail = id + ": amip above 150";
          }
        }
      }
    } catch (const std::exception& ex) {
      pass = false;
      detail = entry.path().filename().string() + ": " + ex.what();
    }
  }
  if (ran == 0) {
    std::printf("SKIP criterion 9: no audit configs found in %s (non-blocking)\n", dir);
    return;
  }
  if (pass && detail.empty()) detail = std::to_string(ran) + " benchmark configs audited";
  report_line(9, "benchmark dataset targets", pass, detail, now_seconds() - t0,
              /*blocking=*/false);
}

}  // namespace

int main(int argc, char** argv) {
  // Optionally run a single criterion: `olsaudit_acceptance 5`
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  auto want = [&](int c) { return only == 0 || only == c; };

  if (want(1)) criterion_soundness();
  if (want(2)) criterion_msn_sandwich();
  if (want(3)) criterion_reaveraging();
  if (want(4)) criterion_dp_exactness();
  if (want(5)) criterion_tightness_trend();
  if (want(6)) criterion_brittleness();
  if (want(7)) criterion_singularity();
  if (want(8)) criterion_scaling();
  if (want(9)) criterion_benchmarks();

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::puts("all blocking criteria passed");
  return 0;
}
