#include "olsaudit/audit_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "olsaudit/csv.hpp"

namespace olsaudit {

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

IngestedFrame ingest(const AuditConfig& cfg) {
  CsvTable table = read_csv(cfg.input);

  std::set<std::string> numeric_cols(cfg.continuous.begin(), cfg.continuous.end());
  if (!cfg.target.empty()) numeric_cols.insert(cfg.target);
  if (!cfg.weight.empty()) numeric_cols.insert(cfg.weight);
  for (const auto& c : {cfg.instrument, cfg.endogenous, cfg.outcome}) {
    if (!c.empty()) numeric_cols.insert(c);
  }
  for (const auto& c : cfg.categorical) {
    if (numeric_cols.count(c)) {
      throw ConfigError("column '" + c + "' cannot be both categorical and numeric");
    }
    table.col(c);  // existence check
  }
  std::map<std::string, int> col_idx;
  for (const auto& c : numeric_cols) col_idx[c] = table.col(c);

  // Row filtering: a row matching any drop rule is removed, tallied per rule.
  IngestedFrame frame;
  std::vector<long> kept;
  for (long r = 0; r < table.n_rows(); ++r) {
    bool drop = false;
    for (const auto& [col, values] : cfg.drop_values) {
      const std::string& cell = table.rows[size_t(r)][size_t(table.col(col))];
      for (const auto& v : values) {
        if (cell == v) {
          frame.dropped_by_rule[col + "=" + v] += 1;
          drop = true;
          break;
        }
      }
      if (drop) break;
    }
    if (!drop) kept.push_back(r);
  }
  frame.n = long(kept.size());
  frame.rows_dropped = table.n_rows() - frame.n;
  if (frame.n == 0) throw DataError("no rows left after filtering");

  for (const auto& [name, ci] : col_idx) {
    Eigen::VectorXd col(frame.n);
    for (long r = 0; r < frame.n; ++r) {
      col[r] = parse_cell_double(table.rows[size_t(kept[size_t(r)])][size_t(ci)],
                                 kept[size_t(r)] + 1, name);
    }
    frame.numeric[name] = std::move(col);
  }

  for (const auto& name : cfg.log_shift) {
    auto it = frame.numeric.find(name);
    if (it == frame.numeric.end()) {
      throw ConfigError("log_shift column '" + name + "' is not a numeric column in use");
    }
    Eigen::VectorXd& col = it->second;
    std::vector<double> vals(col.data(), col.data() + col.size());
    const double med = median_of(vals);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const double shifted = col[i] + med;
      if (!(shifted > 0.0)) {
        throw DataError("log(x + median) undefined for column '" + name + "' at data row " +
                        std::to_string(kept[size_t(i)] + 1));
      }
      col[i] = std::log(shifted);
    }
  }

  if (!cfg.categorical.empty()) {
    if (cfg.categorical.size() > 1 && !cfg.allow_product_categories) {
      throw ConfigError(
          "multiple categorical columns require allow_product_categories; the product "
          "partition treats every value combination as one bucket, which weakens the "
          "certificate's interpretation");
    }
    std::vector<int> cat_idx;
    for (const auto& c : cfg.categorical) cat_idx.push_back(table.col(c));
    auto label_of = [&](long table_row) {
      std::string label;
      for (size_t t = 0; t < cat_idx.size(); ++t) {
        if (t) label.push_back('|');
        label += table.rows[size_t(table_row)][size_t(cat_idx[t])];
      }
      return label;
    };
    std::map<std::string, int> id_of;
    std::vector<int> assignment(size_t(frame.n));
    for (long r = 0; r < frame.n; ++r) {
      const std::string label = label_of(kept[size_t(r)]);
      auto [it, fresh] = id_of.emplace(label, int(frame.category_labels.size()));
      if (fresh) frame.category_labels.push_back(label);
      assignment[size_t(r)] = it->second;
    }
    if (cfg.strict_categories) {
      for (long r = 0; r < table.n_rows(); ++r) {
        const std::string label = label_of(r);
        if (!id_of.count(label)) {
          throw DataError("category '" + label + "' became empty after filtering");
        }
      }
    }
    Eigen::VectorXd w = cfg.weight.empty() ? Eigen::VectorXd() : frame.numeric.at(cfg.weight);
    frame.buckets = Buckets::build(assignment, w);
  }

  if (!cfg.weight.empty()) {
    frame.weights = frame.numeric.at(cfg.weight);
    for (Eigen::Index i = 0; i < frame.weights.size(); ++i) {
      if (!(frame.weights[i] > 0.0)) {
        throw DataError("weights must be strictly positive (row " + std::to_string(i + 1) + ")");
      }
    }
  }
  return frame;
}

namespace {

struct Stage {
  std::string name;
  std::string target;
  std::vector<std::string> design;  // design column names, in order
};

std::vector<MsnBackend> parse_backends(const std::vector<std::string>& names) {
  std::vector<MsnBackend> out;
  for (const auto& n : names) out.push_back(n == "rti" ? MsnBackend::Rti : MsnBackend::Spectral);
  return out;
}

Eigen::VectorXd direction_for(const AuditConfig& cfg, const std::vector<std::string>& design) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(Eigen::Index(design.size()));
  if (cfg.mode == "iv") {
    e[0] = 1.0;  // the instrument leads the design
    return e;
  }
  if (!cfg.direction_vector.empty()) {
    if (cfg.direction_vector.size() != design.size()) {
      throw ConfigError("direction vector length " + std::to_string(cfg.direction_vector.size()) +
                        " != number of continuous features " + std::to_string(design.size()));
    }
    for (size_t i = 0; i < design.size(); ++i) e[Eigen::Index(i)] = cfg.direction_vector[i];
    if (e.norm() == 0.0) throw ConfigError("direction vector is zero");
    return e;
  }
  auto it = std::find(design.begin(), design.end(), cfg.direction);
  if (it == design.end()) throw ConfigError("direction column not in the design");
  e[it - design.begin()] = 1.0;
  return e;
}

void memory_guard(const AuditConfig& cfg, long n, bool streaming_ok, int k_eff) {
  // The dominant cost of the certification is three dense n x n matrices;
  // the streaming RTI path replaces them with n x k cumulative-sum tables.
  const double gib = 1024.0 * 1024.0 * 1024.0;
  double required = 0;
  if (streaming_ok) {
    required = 3.0 * double(n) * double(k_eff + 1) * 8.0;
  } else {
    required = 3.0 * double(n) * double(n) * 8.0;
  }
  if (required > cfg.memory_cap_gib * gib) {
    throw ResourceError(
        "estimated Gram footprint " + std::to_string(required / gib) + " GiB exceeds the cap of " +
        std::to_string(cfg.memory_cap_gib) +
        " GiB; lower k_max, drop the spectral backend (enables streaming), or raise "
        "memory_cap_gib");
  }
}

}  // namespace

void write_synthetic_csv(const std::string& path, const SyntheticData& sd) {
  CsvTable t;
  const Eigen::Index n = sd.data.n(), d = sd.data.d();
  for (Eigen::Index j = 0; j < d; ++j) t.header.push_back("x" + std::to_string(j + 1));
  t.header.push_back("category");
  t.header.push_back("y");
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < d; ++j) row.push_back(format_double(sd.data.X(i, j)));
    row.push_back("c" + std::to_string(sd.buckets.assignment[size_t(i)]));
    row.push_back(format_double(sd.data.Y[i]));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

AuditReport run_audit(const AuditConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  IngestedFrame frame = ingest(cfg);
  const long n = frame.n;

  std::vector<Stage> stages;
  if (cfg.mode == "ols") {
    stages.push_back({"ols", cfg.target, cfg.continuous});
  } else {
    std::vector<std::string> design{cfg.instrument};
    design.insert(design.end(), cfg.continuous.begin(), cfg.continuous.end());
    stages.push_back({"instrument_vs_endogenous", cfg.endogenous, design});
    stages.push_back({"instrument_vs_outcome", cfg.outcome, design});
  }

  const bool categorical = frame.buckets.has_value();
  std::vector<MsnBackend> backends = parse_backends(cfg.backends);
  const bool rti_only = backends.size() == 1 && backends[0] == MsnBackend::Rti;
  const bool streaming_ok = !categorical && rti_only;

  AuditReport report;
  report.config_echo = cfg.to_json();
  report.config_hash = config_hash(cfg);
  report.seed = cfg.seed;
  report.n_ingested = n;
  report.rows_dropped = frame.rows_dropped;
  report.dropped_by_rule = frame.dropped_by_rule;

  for (const Stage& stage : stages) {
    const auto stage_t0 = std::chrono::steady_clock::now();
    RegressionAudit audit;
    audit.name = stage.name;

    RegressionData data;
    data.X.resize(n, Eigen::Index(stage.design.size()));
    for (size_t j = 0; j < stage.design.size(); ++j) {
      auto it = frame.numeric.find(stage.design[j]);
      if (it == frame.numeric.end()) throw ConfigError("unknown design column " + stage.design[j]);
      data.X.col(Eigen::Index(j)) = it->second;
    }
    data.Y = frame.numeric.at(stage.target);
    data.weights = frame.weights;

    Eigen::VectorXd e = direction_for(cfg, stage.design);
    const int m = categorical ? frame.buckets->m : 0;
    audit.n = n;
    audit.d = long(stage.design.size()) + m;
    audit.m = m;
    audit.algorithm = categorical ? "ohare" : "acre";

    const int k_eff = cfg.k_max >= 0
                          ? cfg.k_max
                          : default_k_max(n, Eigen::Index(stage.design.size()) + m);
    memory_guard(cfg, n, streaming_ok, k_eff);

    double beta_e = 0.0, sigma_corr = 0.0, e_scale = 1.0;
    RemovalBounds up, down;
    if (categorical) {
      OhareOptions opts;
      opts.k_max = k_eff;
      ReaveragedRegression reavg = reaverage(data, *frame.buckets, e);
      RegressionData rdata{reavg.Xt, reavg.Yt, Eigen::VectorXd()};
      OlsFit fit = fit_ols(rdata);
      NormalizedRegression norm_up = normalize(fit, rdata, e);
      NormalizedRegression norm_dn = normalize(fit, rdata, -e);
      up = ohare_bounds(norm_up, *frame.buckets, opts);
      down = ohare_bounds(norm_dn, *frame.buckets, opts);
      beta_e = fit.beta.dot(e);
      const long dof = n - long(stage.design.size()) - m;
      sigma_corr = dof > 0 ? fit.residuals.norm() / std::sqrt(double(dof)) : 0.0;
      e_scale = norm_up.e_scale;
    } else {
      OlsFit fit = fit_ols(data);
      NormalizedRegression norm_up = normalize(fit, data, e);
      NormalizedRegression norm_dn = normalize(fit, data, -e);
      if (streaming_ok) {
        up = acre_bounds_streaming(norm_up, k_eff);
        down = acre_bounds_streaming(norm_dn, k_eff);
      } else {
        AcreOptions opts;
        opts.backends = backends;
        opts.k_max = k_eff;
        GramSet grams = compute_grams(norm_up);
        up = acre_bounds(norm_up, grams, opts);
        // G_XZ is invariant under e -> -e, so the Gram set can be shared.
        down = acre_bounds(norm_dn, grams, opts);
      }
      beta_e = fit.beta.dot(e);
      sigma_corr = fit.sigma_hat;
      e_scale = norm_up.e_scale;
    }

    audit.beta_e = beta_e;
    audit.two_sigma = 2.0 * sigma_corr * e_scale;
    audit.e_scale = e_scale;
    audit.up = up;
    audit.down = down;

    // Sign flips when the shift along sign(beta_e) * e exceeds |beta_e|.
    const RemovalBounds& sign_side = beta_e >= 0.0 ? up : down;
    if (cfg.threshold_sign) {
      audit.k_sign_lower = certify(sign_side, std::abs(beta_e)).certified_k_lower;
    }
    if (cfg.threshold_two_sigma) {
      const int a = certify(up, audit.two_sigma).certified_k_lower;
      const int b = certify(down, audit.two_sigma).certified_k_lower;
      audit.k_two_sigma_lower = std::min(a, b);
    }
    for (double theta : cfg.custom_thresholds) {
      audit.custom_certs.emplace_back(theta, certify(up, theta).certified_k_lower);
    }

    if (cfg.attack != "none") {
      // The attack runs on the full one-hot design; dummy columns re-enter
      // as explicit 0/1 features with the direction padded by zeros.
      RegressionData attack_data = data;
      Eigen::VectorXd attack_e = e;
      if (categorical) {
        attack_data.X.conservativeResize(n, data.d() + m);
        attack_data.X.rightCols(m).setZero();
        for (long i = 0; i < n; ++i) {
          attack_data.X(i, data.d() + frame.buckets->assignment[size_t(i)]) = 1.0;
        }
        attack_e = Eigen::VectorXd::Zero(data.d() + m);
        attack_e.head(data.d()) = e;
      }
      if (beta_e < 0.0) attack_e = -attack_e;
      AttackOptions aopts;
      aopts.max_removals = cfg.attack_max_removals;
      if (cfg.attack == "amip" || cfg.attack == "both") {
        aopts.adaptive = false;
        audit.amip = amip_attack(attack_data, attack_e, std::abs(beta_e), aopts);
      }
      if (cfg.attack == "adaptive" || cfg.attack == "both") {
        aopts.adaptive = true;
        audit.amip_adaptive = amip_attack(attack_data, attack_e, std::abs(beta_e), aopts);
      }
    }

    audit.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - stage_t0).count();
    report.regressions.push_back(std::move(audit));
  }

  if (cfg.mode == "iv") {
    // The IV estimate is the ratio of the two stage coefficients; its sign
    // flips only if one stage's sign flips, so the min certificate is sound.
    std::optional<int> ks;
    for (const auto& r : report.regressions) {
      if (r.k_sign_lower) ks = ks ? std::min(*ks, *r.k_sign_lower) : *r.k_sign_lower;
    }
    report.iv_k_sign_lower = ks;
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.peak_memory_bytes = peak_memory_bytes();
  return report;
}

}  // namespace olsaudit
