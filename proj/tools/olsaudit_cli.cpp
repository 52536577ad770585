// olsaudit: certify and attack the robustness of OLS regression conclusions
// to worst-case sample removals.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include "olsaudit/audit_runner.hpp"
#include "olsaudit/csv.hpp"
#include "olsaudit/datagen.hpp"

namespace oa = olsaudit;

namespace {

struct AuditFlags {
  std::string config_path;
  std::optional<std::string> input, output, mode, target, weight, direction, attack;
  std::vector<std::string> formats, continuous, categorical, log_shift, backends, drops;
  std::vector<double> direction_vector, thetas;
  std::optional<int> k_max, attack_max_removals;
  std::optional<double> memory_cap_gib;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> instrument, endogenous, outcome;
  bool no_sign = false, no_two_sigma = false;
  bool allow_product_categories = false, strict_categories = false;
};

void add_audit_flags(CLI::App* cmd, AuditFlags& f) {
  cmd->add_option("-c,--config", f.config_path, "TOML or JSON config file; flags override it");
  cmd->add_option("-i,--input", f.input, "input CSV (header row required)");
  cmd->add_option("-o,--output", f.output, "report output path");
  cmd->add_option("--format", f.formats, "output formats: json, csv, curve")->delimiter(',');
  cmd->add_option("--mode", f.mode, "ols or iv");
  cmd->add_option("--target", f.target, "label column (ols mode)");
  cmd->add_option("--continuous", f.continuous, "continuous feature columns")->delimiter(',');
  cmd->add_option("--categorical", f.categorical, "categorical (one-hot) columns")->delimiter(',');
  cmd->add_option("--weight", f.weight, "sample weight column");
  cmd->add_option("--direction", f.direction, "continuous feature whose coefficient is audited");
  cmd->add_option("--direction-vector", f.direction_vector,
                  "explicit direction over the continuous features")
      ->delimiter(',');
  cmd->add_option("--drop", f.drops, "drop rows where column=value (repeatable)");
  cmd->add_option("--log-shift", f.log_shift, "columns replaced by log(x + median(x))")
      ->delimiter(',');
  cmd->add_option("--instrument", f.instrument, "iv mode: instrument column");
  cmd->add_option("--endogenous", f.endogenous, "iv mode: endogenous column");
  cmd->add_option("--outcome", f.outcome, "iv mode: outcome column");
  cmd->add_option("--backend", f.backends, "MSN backends: rti, spectral")->delimiter(',');
  cmd->add_option("--k-max", f.k_max, "largest removal count to bound");
  cmd->add_option("--theta", f.thetas, "extra thresholds to certify")->delimiter(',');
  cmd->add_flag("--no-sign", f.no_sign, "skip the sign-flip certificate");
  cmd->add_flag("--no-two-sigma", f.no_two_sigma, "skip the 2-sigma certificate");
  cmd->add_option("--attack", f.attack, "none, amip, adaptive, or both");
  cmd->add_option("--attack-max-removals", f.attack_max_removals, "attack step budget");
  cmd->add_flag("--allow-product-categories", f.allow_product_categories,
                "combine multiple categorical columns into their product partition");
  cmd->add_flag("--strict-categories", f.strict_categories,
                "fail when row filtering empties a category");
  cmd->add_option("--memory-cap-gib", f.memory_cap_gib, "refuse audits above this footprint");
  cmd->add_option("--seed", f.seed, "seed recorded in the report");
}

oa::AuditConfig merge_config(const AuditFlags& f) {
  oa::AuditConfig cfg;
  if (!f.config_path.empty()) cfg = oa::load_config_file(f.config_path);
  if (f.input) cfg.input = *f.input;
  if (f.output) cfg.output = *f.output;
  if (!f.formats.empty()) cfg.output_formats = f.formats;
  if (f.mode) cfg.mode = *f.mode;
  if (f.target) cfg.target = *f.target;
  if (!f.continuous.empty()) cfg.continuous = f.continuous;
  if (!f.categorical.empty()) cfg.categorical = f.categorical;
  if (f.weight) cfg.weight = *f.weight;
  if (f.direction) cfg.direction = *f.direction;
  if (!f.direction_vector.empty()) cfg.direction_vector = f.direction_vector;
  for (const auto& rule : f.drops) {
    const auto eq = rule.find('=');
    if (eq == std::string::npos) {
      throw oa::ConfigError("--drop expects column=value, got '" + rule + "'");
    }
    cfg.drop_values[rule.substr(0, eq)].push_back(rule.substr(eq + 1));
  }
  if (!f.log_shift.empty()) cfg.log_shift = f.log_shift;
  if (f.instrument) cfg.instrument = *f.instrument;
  if (f.endogenous) cfg.endogenous = *f.endogenous;
  if (f.outcome) cfg.outcome = *f.outcome;
  if (!f.backends.empty()) cfg.backends = f.backends;
  if (f.k_max) cfg.k_max = *f.k_max;
  if (!f.thetas.empty()) cfg.custom_thresholds = f.thetas;
  if (f.no_sign) cfg.threshold_sign = false;
  if (f.no_two_sigma) cfg.threshold_two_sigma = false;
  if (f.attack) cfg.attack = *f.attack;
  if (f.attack_max_removals) cfg.attack_max_removals = *f.attack_max_removals;
  if (f.allow_product_categories) cfg.allow_product_categories = true;
  if (f.strict_categories) cfg.strict_categories = true;
  if (f.memory_cap_gib) cfg.memory_cap_gib = *f.memory_cap_gib;
  if (f.seed) cfg.seed = *f.seed;
  return cfg;
}

void print_summary(const oa::AuditReport& report) {
  for (const auto& r : report.regressions) {
    std::cout << r.name << ": n=" << r.n << " d=" << r.d << " m=" << r.m << " ("
              << r.algorithm << ")\n";
    std::cout << "  <beta,e> = " << r.beta_e << "  2sigma = " << r.two_sigma << "\n";
    if (r.k_sign_lower) {
      std::cout << "  certified: sign safe for any " << *r.k_sign_lower << " removals\n";
    }
    if (r.k_two_sigma_lower) {
      std::cout << "  certified: within 2sigma for any " << *r.k_two_sigma_lower
                << " removals\n";
    }
    if (r.amip && r.amip->k_found) {
      std::cout << "  amip attack flips the sign with " << *r.amip->k_found << " removals\n";
    }
    if (r.amip_adaptive && r.amip_adaptive->k_found) {
      std::cout << "  adaptive attack flips the sign with " << *r.amip_adaptive->k_found
                << " removals\n";
    }
  }
  if (report.iv_k_sign_lower) {
    std::cout << "iv: sign certified safe for any " << *report.iv_k_sign_lower << " removals\n";
  }
  std::cout << "wall " << report.wall_seconds << " s, peak memory "
            << report.peak_memory_bytes / (1024.0 * 1024.0) << " MiB\n";
}

int run_audit_cmd(const AuditFlags& f) {
  oa::AuditConfig cfg = merge_config(f);
  oa::AuditReport report = oa::run_audit(cfg);
  for (const auto& fmt : cfg.output_formats) {
    std::string path = cfg.output;
    if (fmt == "csv") path = path.substr(0, path.find_last_of('.')) + "_bounds.csv";
    if (fmt == "curve") path = path.substr(0, path.find_last_of('.')) + "_curve.csv";
    oa::emit(report, fmt, path);
  }
  print_summary(report);
  return 0;
}

int run_attack_cmd(const AuditFlags& f, double theta, bool adaptive, bool has_theta) {
  oa::AuditConfig cfg = merge_config(f);
  cfg.attack = adaptive ? "adaptive" : "amip";
  cfg.validate();
  oa::IngestedFrame frame = oa::ingest(cfg);

  oa::RegressionData data;
  data.X.resize(frame.n, Eigen::Index(cfg.continuous.size()));
  for (size_t j = 0; j < cfg.continuous.size(); ++j) {
    data.X.col(Eigen::Index(j)) = frame.numeric.at(cfg.continuous[j]);
  }
  data.Y = frame.numeric.at(cfg.target);
  data.weights = frame.weights;

  Eigen::VectorXd e = Eigen::VectorXd::Zero(data.d());
  if (!cfg.direction_vector.empty()) {
    for (size_t j = 0; j < cfg.direction_vector.size(); ++j) {
      e[Eigen::Index(j)] = cfg.direction_vector[j];
    }
  } else {
    auto it = std::find(cfg.continuous.begin(), cfg.continuous.end(), cfg.direction);
    e[it - cfg.continuous.begin()] = 1.0;
  }

  int m = 0;
  if (frame.buckets) {
    m = frame.buckets->m;
    const Eigen::Index d0 = data.d();
    data.X.conservativeResize(frame.n, d0 + m);
    data.X.rightCols(m).setZero();
    for (long i = 0; i < frame.n; ++i) {
      data.X(i, d0 + frame.buckets->assignment[size_t(i)]) = 1.0;
    }
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(d0 + m);
    e2.head(d0) = e;
    e = e2;
  }

  oa::OlsFit fit = oa::fit_ols(data);
  double beta_e = fit.beta.dot(e);
  if (!has_theta) theta = std::abs(beta_e);
  if (beta_e < 0.0) e = -e;

  oa::AttackOptions opts;
  opts.adaptive = adaptive;
  if (f.attack_max_removals) opts.max_removals = *f.attack_max_removals;
  oa::AttackResult res = oa::amip_attack(data, e, theta, opts);

  if (res.k_found) {
    std::cout << "threshold " << theta << " crossed after " << *res.k_found << " removals\n";
  } else {
    std::cout << "threshold " << theta << " not crossed"
              << (res.singular_stop ? " (refit went singular)" : "") << "\n";
  }
  nlohmann::json j;
  j["theta"] = theta;
  j["adaptive"] = adaptive;
  j["k_found"] = res.k_found ? nlohmann::json(*res.k_found) : nlohmann::json(nullptr);
  j["singular_stop"] = res.singular_stop;
  j["removal_order"] = res.removal_order;
  j["shift_trace"] = res.achieved_shift;
  std::ofstream out(cfg.output);
  out << j.dump(2) << '\n';
  return 0;
}

int run_generate_cmd(const oa::SyntheticSpec& spec, const std::string& out_path) {
  oa::SyntheticData sd = oa::generate(spec);
  oa::write_synthetic_csv(out_path, sd);
  std::cout << "wrote " << sd.data.n() << " samples (" << sd.data.d() << " features, "
            << sd.buckets.m << " buckets) to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worst-case sample-removal robustness auditing for OLS regressions"};
  app.require_subcommand(1);

  AuditFlags audit_flags;
  CLI::App* audit_cmd = app.add_subcommand("audit", "certify a regression and run baselines");
  add_audit_flags(audit_cmd, audit_flags);

  AuditFlags attack_flags;
  double attack_theta = 0.0;
  bool attack_adaptive = false;
  CLI::App* attack_cmd = app.add_subcommand("attack", "run the AMIP removal attack only");
  add_audit_flags(attack_cmd, attack_flags);
  CLI::Option* theta_opt =
      attack_cmd->add_option("--threshold", attack_theta, "shift to reach (default: |<beta,e>|)");
  attack_cmd->add_flag("--adaptive", attack_adaptive, "re-rank after every removal");

  oa::SyntheticSpec gen_spec;
  std::string gen_law = "gaussian", gen_out = "synthetic.csv";
  std::vector<double> gen_beta, gen_mu;
  CLI::App* gen_cmd = app.add_subcommand("generate", "write a synthetic dataset CSV");
  gen_cmd->add_option("--n", gen_spec.n, "samples")->required();
  gen_cmd->add_option("--d", gen_spec.d, "continuous features")->required();
  gen_cmd->add_option("--m", gen_spec.m, "categories");
  gen_cmd->add_option("--bucket-sizes", gen_spec.bucket_sizes, "explicit bucket sizes")
      ->delimiter(',');
  gen_cmd->add_option("--beta", gen_beta, "ground-truth coefficients")->delimiter(',');
  gen_cmd->add_option("--mu", gen_mu, "per-bucket label offsets")->delimiter(',');
  gen_cmd->add_option("--sigma", gen_spec.sigma, "label noise scale");
  gen_cmd->add_option("--law", gen_law, "gaussian, sphere, or hypercube");
  gen_cmd->add_option("--seed", gen_spec.seed, "PRNG seed");
  gen_cmd->add_option("-o,--output", gen_out, "output CSV path");

  std::string brittle_in, brittle_out = "brittle.csv", brittle_col, brittle_target = "y";
  std::vector<std::string> brittle_features;
  std::vector<double> brittle_gamma;
  double brittle_budget = 1e-3;
  std::uint64_t brittle_seed = 0;
  CLI::App* brittle_cmd =
      app.add_subcommand("brittle", "perturb a near-zero column to plant a small flipping set");
  brittle_cmd->add_option("-i,--input", brittle_in, "input CSV")->required();
  brittle_cmd->add_option("--continuous", brittle_features, "feature columns")
      ->required()
      ->delimiter(',');
  brittle_cmd->add_option("--target", brittle_target, "label column");
  brittle_cmd->add_option("--column", brittle_col, "designated (mostly zero) column")->required();
  brittle_cmd->add_option("--gamma", brittle_gamma, "coefficients forced on the retained rows")
      ->required()
      ->delimiter(',');
  brittle_cmd->add_option("--budget", brittle_budget, "perturbation norm budget");
  brittle_cmd->add_option("--seed", brittle_seed, "PRNG seed for the non-degeneracy nudge");
  brittle_cmd->add_option("-o,--output", brittle_out, "output CSV path");

  int bench_n = 256, bench_d = 8, bench_k_max = -1;
  std::uint64_t bench_seed = 1;
  std::string bench_out;
  CLI::App* bench_cmd = app.add_subcommand("msn-bench", "compare MSN backends on a synthetic Gram");
  bench_cmd->add_option("--n", bench_n, "vectors");
  bench_cmd->add_option("--d", bench_d, "dimension");
  bench_cmd->add_option("--seed", bench_seed, "PRNG seed");
  bench_cmd->add_option("--k-max", bench_k_max, "largest subset size");
  bench_cmd->add_option("-o,--output", bench_out, "optional CSV output");

  try {
    app.parse(argc, argv);

    if (audit_cmd->parsed()) return run_audit_cmd(audit_flags);
    if (attack_cmd->parsed()) {
      return run_attack_cmd(attack_flags, attack_theta, attack_adaptive, theta_opt->count() > 0);
    }
    if (gen_cmd->parsed()) {
      gen_spec.law = oa::covariate_law_from_string(gen_law);
      if (!gen_beta.empty()) {
        gen_spec.beta_gt =
            Eigen::Map<Eigen::VectorXd>(gen_beta.data(), Eigen::Index(gen_beta.size()));
      }
      if (!gen_mu.empty()) {
        gen_spec.mu = Eigen::Map<Eigen::VectorXd>(gen_mu.data(), Eigen::Index(gen_mu.size()));
      }
      return run_generate_cmd(gen_spec, gen_out);
    }
    if (brittle_cmd->parsed()) {
      oa::CsvTable t = oa::read_csv(brittle_in);
      oa::RegressionData data;
      data.X.resize(t.n_rows(), Eigen::Index(brittle_features.size()));
      for (size_t j = 0; j < brittle_features.size(); ++j) {
        const int c = t.col(brittle_features[j]);
        for (long r = 0; r < t.n_rows(); ++r) {
          data.X(r, Eigen::Index(j)) =
              oa::parse_cell_double(t.rows[size_t(r)][size_t(c)], r + 1, brittle_features[j]);
        }
      }
      data.Y.resize(t.n_rows());
      const int yc = t.col(brittle_target);
      for (long r = 0; r < t.n_rows(); ++r) {
        data.Y[r] = oa::parse_cell_double(t.rows[size_t(r)][size_t(yc)], r + 1, brittle_target);
      }
      auto col_it = std::find(brittle_features.begin(), brittle_features.end(), brittle_col);
      if (col_it == brittle_features.end()) {
        throw oa::ConfigError("--column must name one of the --continuous features");
      }
      Eigen::VectorXd gamma =
          Eigen::Map<Eigen::VectorXd>(brittle_gamma.data(), Eigen::Index(brittle_gamma.size()));
      oa::RegressionData out = oa::make_brittle(
          data, int(col_it - brittle_features.begin()), gamma, brittle_budget, brittle_seed);
      oa::CsvTable ot = t;
      for (size_t j = 0; j < brittle_features.size(); ++j) {
        const int c = ot.col(brittle_features[j]);
        for (long r = 0; r < ot.n_rows(); ++r) {
          ot.rows[size_t(r)][size_t(c)] = oa::format_double(out.X(r, Eigen::Index(j)));
        }
      }
      for (long r = 0; r < ot.n_rows(); ++r) {
        ot.rows[size_t(r)][size_t(yc)] = oa::format_double(out.Y[r]);
      }
      oa::write_csv(brittle_out, ot);
      std::cout << "wrote perturbed dataset to " << brittle_out << "\n";
      return 0;
    }
    if (bench_cmd->parsed()) {
      oa::SyntheticSpec spec;
      spec.n = bench_n;
      spec.d = bench_d;
      spec.seed = bench_seed;
      oa::SyntheticData sd = oa::generate(spec);
      Eigen::MatrixXd G = sd.data.X * sd.data.X.transpose();
      const int km = bench_k_max < 0 ? bench_n : bench_k_max;

      auto timed = [](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        auto res = fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return std::make_pair(std::move(res), dt);
      };
      auto [rti, t_rti] = timed([&] { return oa::rti_bound(G, km); });
      auto [spec_b, t_spec] = timed([&] { return oa::spectral_bound(G, km); });
      auto [greedy, t_greedy] = timed([&] { return oa::greedy_lower_bound(G); });

      std::cout << "backend timings: rti " << t_rti << " s, spectral " << t_spec << " s, greedy "
                << t_greedy << " s\n";
      oa::CsvTable t;
      t.header = {"k", "greedy_lower", "rti_upper", "spectral_upper"};
      for (int k = 1; k <= km; ++k) {
        t.rows.push_back({std::to_string(k),
                          oa::format_double(std::sqrt(std::max(0.0, greedy.L[size_t(k)]))),
                          oa::format_double(rti[k]), oa::format_double(spec_b[k])});
      }
      if (!bench_out.empty()) {
        oa::write_csv(bench_out, t);
      } else {
        std::cout << oa::format_csv(t);
      }
      return 0;
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const oa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case oa::ErrorKind::Config: return 2;
      case oa::ErrorKind::Data: return 3;
      case oa::ErrorKind::Numerical: return 4;
      case oa::ErrorKind::Resource: return 5;
    }
    return 4;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
