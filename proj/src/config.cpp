#include "olsaudit/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace olsaudit {

using nlohmann::json;

void AuditConfig::validate() const {
  if (input.empty()) throw ConfigError("input path is required");
  if (mode != "ols" && mode != "iv") throw ConfigError("mode must be 'ols' or 'iv'");
  if (mode == "ols") {
    if (target.empty()) throw ConfigError("target column is required in ols mode");
    if (continuous.empty()) throw ConfigError("at least one continuous column is required");
  } else {
    if (instrument.empty() || endogenous.empty() || outcome.empty()) {
      throw ConfigError("iv mode requires instrument, endogenous and outcome roles");
    }
  }
  if (direction.empty() && direction_vector.empty() && mode == "ols") {
    throw ConfigError("a direction (feature name or explicit vector) is required");
  }
  if (mode == "ols" && !direction.empty() &&
      std::find(continuous.begin(), continuous.end(), direction) == continuous.end()) {
    // The direction must reference a continuous feature; categoricals are
    // handled by the one-hot aware pipeline and cannot be audited directly.
    throw ConfigError("direction '" + direction + "' is not a continuous feature");
  }
  if (!direction_vector.empty() && !direction.empty()) {
    throw ConfigError("give either a direction name or an explicit vector, not both");
  }
  for (const auto& b : backends) {
    if (b != "rti" && b != "spectral") throw ConfigError("unknown backend: " + b);
  }
  if (backends.empty()) throw ConfigError("at least one backend is required");
  if (attack != "none" && attack != "amip" && attack != "adaptive" && attack != "both") {
    throw ConfigError("attack must be none | amip | adaptive | both");
  }
  for (const auto& f : output_formats) {
    if (f != "json" && f != "csv" && f != "curve") throw ConfigError("unknown output format: " + f);
  }
  if (memory_cap_gib <= 0.0) throw ConfigError("memory cap must be positive");
}

json AuditConfig::to_json() const {
  json j;
  j["input"] = input;
  j["output"] = output;
  j["output_formats"] = output_formats;
  j["mode"] = mode;
  j["columns"] = {{"target", target},     {"continuous", continuous},
                  {"categorical", categorical}, {"weight", weight},
                  {"direction", direction}};
  if (!direction_vector.empty()) j["columns"]["direction_vector"] = direction_vector;
  json drops = json::object();
  for (const auto& [col, vals] : drop_values) drops[col] = vals;
  j["preprocess"] = {{"drop", drops}, {"log_shift", log_shift}};
  if (mode == "iv") {
    j["iv"] = {{"instrument", instrument}, {"endogenous", endogenous}, {"outcome", outcome}};
  }
  j["backends"] = backends;
  j["k_max"] = k_max;
  j["thresholds"] = {{"sign", threshold_sign},
                     {"two_sigma", threshold_two_sigma},
                     {"custom", custom_thresholds}};
  j["attack"] = attack;
  j["attack_max_removals"] = attack_max_removals;
  j["allow_product_categories"] = allow_product_categories;
  j["strict_categories"] = strict_categories;
  j["memory_cap_gib"] = memory_cap_gib;
  j["seed"] = seed;
  return j;
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

AuditConfig AuditConfig::from_json(const json& j) {
  AuditConfig c;
  try {
    maybe(j, "input", c.input);
    maybe(j, "output", c.output);
    maybe(j, "output_formats", c.output_formats);
    maybe(j, "mode", c.mode);
    if (j.contains("columns")) {
      const json& cols = j.at("columns");
      maybe(cols, "target", c.target);
      maybe(cols, "continuous", c.continuous);
      maybe(cols, "categorical", c.categorical);
      maybe(cols, "weight", c.weight);
      maybe(cols, "direction", c.direction);
      maybe(cols, "direction_vector", c.direction_vector);
    }
    if (j.contains("preprocess")) {
      const json& p = j.at("preprocess");
      if (p.contains("drop")) {
        for (auto it = p.at("drop").begin(); it != p.at("drop").end(); ++it) {
          c.drop_values[it.key()] = it.value().get<std::vector<std::string>>();
        }
      }
      maybe(p, "log_shift", c.log_shift);
    }
    if (j.contains("iv")) {
      const json& iv = j.at("iv");
      maybe(iv, "instrument", c.instrument);
      maybe(iv, "endogenous", c.endogenous);
      maybe(iv, "outcome", c.outcome);
    }
    maybe(j, "backends", c.backends);
    maybe(j, "k_max", c.k_max);
    if (j.contains("thresholds")) {
      const json& t = j.at("thresholds");
      maybe(t, "sign", c.threshold_sign);
      maybe(t, "two_sigma", c.threshold_two_sigma);
      maybe(t, "custom", c.custom_thresholds);
    }
    maybe(j, "attack", c.attack);
    maybe(j, "attack_max_removals", c.attack_max_removals);
    maybe(j, "allow_product_categories", c.allow_product_categories);
    maybe(j, "strict_categories", c.strict_categories);
    maybe(j, "memory_cap_gib", c.memory_cap_gib);
    maybe(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

namespace toml {

// Just enough TOML for flat configuration files. The grammar handled here:
// comments, [section] headers (one level), key = value with string, number,
// boolean or homogeneous-array values, and quoted keys.

struct Parser {
  const std::string& text;
  size_t pos = 0;
  int line = 1;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("TOML line " + std::to_string(line) + ": " + msg);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_ws(bool newlines) {
    while (!eof()) {
      char ch = text[pos];
      if (ch == '#') {
        while (!eof() && text[pos] != '\n') ++pos;
      } else if (ch == ' ' || ch == '\t' || ch == '\r') {
        ++pos;
      } else if (ch == '\n' && newlines) {
        ++line;
        ++pos;
      } else {
        break;
      }
    }
  }

  std::string parse_basic_string() {
    if (peek() != '"') fail("expected string");
    ++pos;
    std::string out;
    while (!eof() && peek() != '"') {
      char ch = text[pos++];
      if (ch == '\\') {
        if (eof()) fail("dangling escape");
        char esc = text[pos++];
        switch (esc) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unsupported escape: \\") + esc);
        }
      } else if (ch == '\n') {
        fail("newline in string");
      } else {
        out.push_back(ch);
      }
    }
    if (eof()) fail("unterminated string");
    ++pos;
    return out;
  }

  std::string parse_key() {
    skip_ws(false);
    if (!eof() && peek() == '"') return parse_basic_string();
    std::string out;
    while (!eof()) {
      char ch = peek();
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-') {
        out.push_back(ch);
        ++pos;
      } else {
        break;
      }
    }
    if (out.empty()) fail("expected key");
    return out;
  }

  json parse_value() {
    skip_ws(false);
    if (eof()) fail("expected value");
    char ch = peek();
    if (ch == '"') return parse_basic_string();
    if (ch == '[') {
      ++pos;
      json arr = json::array();
      skip_ws(true);
      if (!eof() && peek() == ']') {
        ++pos;
        return arr;
      }
      while (true) {
        arr.push_back(parse_value());
        skip_ws(true);
        if (!eof() && peek() == ',') {
          ++pos;
          skip_ws(true);
          if (!eof() && peek() == ']') {  // trailing comma
            ++pos;
            return arr;
          }
          continue;
        }
        if (!eof() && peek() == ']') {
          ++pos;
          return arr;
        }
        fail("expected ',' or ']' in array");
      }
    }
    // bare scalar: true/false or a number
    std::string tok;
    while (!eof()) {
      char c2 = peek();
      if (c2 == '\n' || c2 == '#' || c2 == ',' || c2 == ']' || c2 == ' ' || c2 == '\t' ||
          c2 == '\r') {
        break;
      }
      tok.push_back(c2);
      ++pos;
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.empty()) fail("expected value");
    try {
      size_t used = 0;
      if (tok.find_first_of(".eE") == std::string::npos &&
          tok.find("inf") == std::string::npos && tok.find("nan") == std::string::npos) {
        long long v = std::stoll(tok, &used);
        if (used == tok.size()) return v;
      }
      double v = std::stod(tok, &used);
      if (used == tok.size()) return v;
    } catch (...) {
    }
    fail("unsupported value: " + tok);
  }

  json parse_document() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_ws(true);
      if (eof()) break;
      if (peek() == '[') {
        ++pos;
        std::string name = parse_key();
        skip_ws(false);
        if (eof() || peek() != ']') fail("expected ']'");
        ++pos;
        root[name] = root.value(name, json::object());
        table = &root[name];
        continue;
      }
      std::string key = parse_key();
      skip_ws(false);
      if (eof() || peek() != '=') fail("expected '=' after key '" + key + "'");
      ++pos;
      (*table)[key] = parse_value();
      skip_ws(false);
      if (!eof() && peek() != '\n') fail("trailing content after value for '" + key + "'");
    }
    return root;
  }
};

}  // namespace toml

json toml_to_json(const std::string& text) {
  toml::Parser p(text);
  return p.parse_document();
}

AuditConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  json j;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") {
    j = toml_to_json(text);
  } else {
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("cannot parse config JSON: ") + e.what());
    }
  }
  return AuditConfig::from_json(j);
}

std::string config_hash(const AuditConfig& cfg) {
  const std::string dump = cfg.to_json().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace olsaudit
