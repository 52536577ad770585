#include "olsaudit/report.hpp"

#include <sys/resource.h>

#include <fstream>
#include <limits>
#include <sstream>

#include "olsaudit/csv.hpp"

namespace olsaudit {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json bounds_to_json(const RemovalBounds& b) {
  json j;
  j["units"] = b.units == BoundUnits::Original ? "original" : "normalized";
  j["certified_up_to"] = b.certified_up_to;
  json L = json::array(), U = json::array(), A = json::array();
  for (double v : b.L) L.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  for (double v : b.U) U.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  for (double v : b.first_order) A.push_back(v);
  j["L"] = std::move(L);
  j["U"] = std::move(U);
  j["first_order"] = std::move(A);
  return j;
}

RemovalBounds bounds_from_json(const json& j) {
  RemovalBounds b;
  b.units = j.at("units").get<std::string>() == "original" ? BoundUnits::Original
                                                           : BoundUnits::Normalized;
  b.certified_up_to = j.at("certified_up_to").get<int>();
  for (const auto& v : j.at("L")) b.L.push_back(v.is_null() ? -kInf : v.get<double>());
  for (const auto& v : j.at("U")) b.U.push_back(v.is_null() ? kInf : v.get<double>());
  for (const auto& v : j.at("first_order")) b.first_order.push_back(v.get<double>());
  return b;
}

json attack_to_json(const AttackResult& a) {
  json j;
  j["k_found"] = a.k_found ? json(*a.k_found) : json(nullptr);
  j["singular_stop"] = a.singular_stop;
  j["removal_order"] = a.removal_order;
  j["shift_trace"] = a.achieved_shift;
  return j;
}

AttackResult attack_from_json(const json& j) {
  AttackResult a;
  if (!j.at("k_found").is_null()) a.k_found = j.at("k_found").get<int>();
  a.singular_stop = j.at("singular_stop").get<bool>();
  a.removal_order = j.at("removal_order").get<std::vector<int>>();
  a.achieved_shift = j.at("shift_trace").get<std::vector<double>>();
  return a;
}

}  // namespace

json report_to_json(const AuditReport& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["provenance"] = {{"software_version", report.software_version},
                     {"config_hash", report.config_hash},
                     {"seed", report.seed},
                     {"config", report.config_echo}};
  j["performance"] = {{"wall_seconds", report.wall_seconds},
                      {"peak_memory_bytes", report.peak_memory_bytes}};
  json dropped = json::object();
  for (const auto& [rule, count] : report.dropped_by_rule) dropped[rule] = count;
  j["ingest"] = {{"n", report.n_ingested},
                 {"rows_dropped", report.rows_dropped},
                 {"dropped_by_rule", dropped}};
  j["iv_k_sign_lower"] = report.iv_k_sign_lower ? json(*report.iv_k_sign_lower) : json(nullptr);

  json regs = json::array();
  for (const auto& r : report.regressions) {
    json rj;
    rj["name"] = r.name;
    rj["n"] = r.n;
    rj["d"] = r.d;
    rj["m"] = r.m;
    rj["algorithm"] = r.algorithm;
    rj["beta_e"] = r.beta_e;
    rj["two_sigma"] = r.two_sigma;
    rj["e_scale"] = r.e_scale;
    rj["bounds"] = {{"up", bounds_to_json(r.up)}, {"down", bounds_to_json(r.down)}};
    json certs;
    certs["k_sign_lower"] = r.k_sign_lower ? json(*r.k_sign_lower) : json(nullptr);
    certs["k_two_sigma_lower"] =
        r.k_two_sigma_lower ? json(*r.k_two_sigma_lower) : json(nullptr);
    json custom = json::array();
    for (const auto& [theta, k] : r.custom_certs) {
      custom.push_back({{"theta", theta}, {"k_lower", k}});
    }
    certs["custom"] = std::move(custom);
    rj["certificates"] = std::move(certs);
    json attacks = json::object();
    if (r.amip) attacks["amip"] = attack_to_json(*r.amip);
    if (r.amip_adaptive) attacks["amip_adaptive"] = attack_to_json(*r.amip_adaptive);
    rj["attacks"] = std::move(attacks);
    rj["wall_seconds"] = r.wall_seconds;
    regs.push_back(std::move(rj));
  }
  j["regressions"] = std::move(regs);
  return j;
}

AuditReport report_from_json(const json& j) {
  AuditReport r;
  r.schema_version = j.at("schema_version").get<std::string>();
  r.software_version = j.at("provenance").at("software_version").get<std::string>();
  r.config_hash = j.at("provenance").at("config_hash").get<std::string>();
  r.seed = j.at("provenance").at("seed").get<std::uint64_t>();
  r.config_echo = j.at("provenance").at("config");
  r.wall_seconds = j.at("performance").at("wall_seconds").get<double>();
  r.peak_memory_bytes = j.at("performance").at("peak_memory_bytes").get<long>();
  r.n_ingested = j.at("ingest").at("n").get<long>();
  r.rows_dropped = j.at("ingest").at("rows_dropped").get<long>();
  for (auto it = j.at("ingest").at("dropped_by_rule").begin();
       it != j.at("ingest").at("dropped_by_rule").end(); ++it) {
    r.dropped_by_rule[it.key()] = it.value().get<long>();
  }
  if (!j.at("iv_k_sign_lower").is_null()) r.iv_k_sign_lower = j.at("iv_k_sign_lower").get<int>();
  for (const auto& rj : j.at("regressions")) {
    RegressionAudit a;
    a.name = rj.at("name").get<std::string>();
    a.n = rj.at("n").get<long>();
    a.d = rj.at("d").get<long>();
    a.m = rj.at("m").get<long>();
    a.algorithm = rj.at("algorithm").get<std::string>();
    a.beta_e = rj.at("beta_e").get<double>();
    a.two_sigma = rj.at("two_sigma").get<double>();
    a.e_scale = rj.at("e_scale").get<double>();
    a.up = bounds_from_json(rj.at("bounds").at("up"));
    a.down = bounds_from_json(rj.at("bounds").at("down"));
    const json& certs = rj.at("certificates");
    if (!certs.at("k_sign_lower").is_null()) a.k_sign_lower = certs.at("k_sign_lower").get<int>();
    if (!certs.at("k_two_sigma_lower").is_null()) {
      a.k_two_sigma_lower = certs.at("k_two_sigma_lower").get<int>();
    }
    for (const auto& cj : certs.at("custom")) {
      a.custom_certs.emplace_back(cj.at("theta").get<double>(), cj.at("k_lower").get<int>());
    }
    if (rj.at("attacks").contains("amip")) a.amip = attack_from_json(rj.at("attacks").at("amip"));
    if (rj.at("attacks").contains("amip_adaptive")) {
      a.amip_adaptive = attack_from_json(rj.at("attacks").at("amip_adaptive"));
    }
    a.wall_seconds = rj.at("wall_seconds").get<double>();
    r.regressions.push_back(std::move(a));
  }
  return r;
}

namespace {

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const size_t dot = path.find_last_of('.');
  const size_t slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

std::string bound_cell(double v) {
  if (std::isfinite(v)) return format_double(v);
  return v > 0 ? "inf" : "-inf";
}

CsvTable bounds_table(const RegressionAudit& r) {
  CsvTable t;
  t.header = {"k", "L", "U", "first_order"};
  for (int k = 0; k <= r.up.k_max(); ++k) {
    t.rows.push_back({std::to_string(k), bound_cell(r.up.L[size_t(k)]),
                      bound_cell(r.up.U[size_t(k)]), format_double(r.up.first_order[size_t(k)])});
  }
  return t;
}

CsvTable curve_table(const RegressionAudit& r) {
  CsvTable t;
  t.header = {"k", "L", "U", "amip_shift"};
  for (int k = 0; k <= r.up.k_max(); ++k) {
    std::string amip;
    if (r.amip && k >= 1 && size_t(k) <= r.amip->achieved_shift.size()) {
      amip = format_double(r.amip->achieved_shift[size_t(k - 1)]);
    }
    t.rows.push_back(
        {std::to_string(k), bound_cell(r.up.L[size_t(k)]), bound_cell(r.up.U[size_t(k)]), amip});
  }
  return t;
}

}  // namespace

void emit(const AuditReport& report, const std::string& format, const std::string& path) {
  if (format == "json") {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << report_to_json(report).dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
    return;
  }
  if (format != "csv" && format != "curve") throw ConfigError("unknown emit format: " + format);
  const bool single = report.regressions.size() == 1;
  for (const auto& r : report.regressions) {
    const std::string p = single ? path : with_suffix(path, "_" + r.name);
    write_csv(p, format == "csv" ? bounds_table(r) : curve_table(r));
  }
}

long peak_memory_bytes() {
  struct rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) == 0 && usage.ru_maxrss > 0) {
    return long(usage.ru_maxrss) * 1024;  // ru_maxrss is in KiB on Linux
  }
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmPeak:", 0) == 0) {
      std::istringstream ss(line.substr(7));
      long kb = 0;
      ss >> kb;
      return kb * 1024;
    }
  }
  return 0;
}

}  // namespace olsaudit
