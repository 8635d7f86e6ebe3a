#pragma once

// Configuration: a key/value file with [sections] (INI-compatible TOML
// subset), loaded from --config, $MACROBALL_CONFIG or ./macroball.toml.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "macroball/constants.hpp"
#include "macroball/error.hpp"
#include "macroball/extremal.hpp"
#include "macroball/json_writer.hpp"
#include "macroball/kernel.hpp"
#include "macroball/numerics.hpp"

namespace macroball {

struct GridConfig {
  std::vector<int> dims = {2, 3, 4};
  std::vector<double> r_values = {0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> lambda_values = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
};

struct OutputConfig {
  std::string format = "json";
  std::string path = "-";
};

struct Config {
  Tolerance quad;
  RayOptions ray;
  Tolerance tv = tv_default_tolerance;
  ExternalConstants externals;
  GridConfig grid;
  OutputConfig output;
  int threads = 4;

  PipelineOptions pipeline() const { return {quad, ray}; }

  void validate() const {
    if (grid.dims.empty() || grid.r_values.empty() || grid.lambda_values.empty())
      throw Error(ErrorKind::ConfigError, "grid lists must be non-empty");
    for (int n : grid.dims)
      if (n < 2) throw Error(ErrorKind::ConfigError, "grid.dims entries must be >= 2");
    for (double r : grid.r_values)
      if (!(r > 0.0)) throw Error(ErrorKind::ConfigError, "grid.r_values entries must be > 0");
    for (double l : grid.lambda_values)
      if (!(l > 0.0)) throw Error(ErrorKind::ConfigError, "grid.lambda_values entries must be > 0");
    if (!(ray.max_ray_cut > 0.0) || !(ray.tol > 0.0) || !(ray.grid_density > 0.0))
      throw Error(ErrorKind::ConfigError, "extremal settings must be > 0");
    if (output.format != "json" && output.format != "csv")
      throw Error(ErrorKind::ConfigError, "output.format must be json or csv");
    if (threads < 1) throw Error(ErrorKind::ConfigError, "verify.threads must be >= 1");
    externals.validate();
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::string unquote(std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

inline double parse_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::ConfigError, "key '" + key + "': cannot parse '" + s + "' as a number");
  return v;
}

inline int parse_int(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::ConfigError, "key '" + key + "': cannot parse '" + s + "' as an integer");
  return v;
}

inline std::vector<std::string> split_list(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw Error(ErrorKind::ConfigError, "key '" + key + "': expected a list like [1, 2, 3]");
  s = s.substr(1, s.size() - 2);
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string item = trim(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

}  // namespace detail

inline Config parse_config(std::istream& in, const std::string& source = "<config>") {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::ConfigError, source + ": " + e.what());
  }

  Config cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw Error(ErrorKind::ConfigError, source + ": key '" + section + "' must live in a [section]");
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const std::string value = node.data();
      if (section == "numerics") {
        if (key == "rel") cfg.quad.rel = detail::parse_double(name, value);
        else if (key == "abs") cfg.quad.abs = detail::parse_double(name, value);
        else if (key == "max_depth") cfg.quad.max_depth = detail::parse_int(name, value);
        else throw Error(ErrorKind::ConfigError, source + ": unknown key " + name);
      } else if (section == "extremal") {
        if (key == "tol") cfg.ray.tol = detail::parse_double(name, value);
        else if (key == "max_ray_cut") cfg.ray.max_ray_cut = detail::parse_double(name, value);
        else if (key == "grid_density") cfg.ray.grid_density = detail::parse_double(name, value);
        else throw Error(ErrorKind::ConfigError, source + ": unknown key " + name);
      } else if (section == "kernel") {
        if (key == "tv_rel") cfg.tv.rel = detail::parse_double(name, value);
        else if (key == "tv_abs") cfg.tv.abs = detail::parse_double(name, value);
        else if (key == "tv_max_depth") cfg.tv.max_depth = detail::parse_int(name, value);
        else throw Error(ErrorKind::ConfigError, source + ": unknown key " + name);
      } else if (section == "grid") {
        if (key == "dims") {
          cfg.grid.dims.clear();
          for (const auto& item : detail::split_list(name, value)) cfg.grid.dims.push_back(detail::parse_int(name, item));
        } else if (key == "r_values" || key == "lambda_values") {
          auto& target = key == "r_values" ? cfg.grid.r_values : cfg.grid.lambda_values;
          target.clear();
          for (const auto& item : detail::split_list(name, value)) target.push_back(detail::parse_double(name, item));
        } else {
          throw Error(ErrorKind::ConfigError, source + ": unknown key " + name);
        }
      } else if (section == "croke_cprime" || section == "ideal_simplex_vol_override") {
        auto& table = section == "croke_cprime" ? cfg.externals.croke_cprime : cfg.externals.ideal_simplex_vol_override;
        table[detail::parse_int(name, key)] = detail::parse_double(name, value);
      } else if (section == "output") {
        if (key == "format") cfg.output.format = detail::unquote(value);
        else if (key == "path") cfg.output.path = detail::unquote(value);
        else throw Error(ErrorKind::ConfigError, source + ": unknown key " + name);
      } else if (section == "verify") {
        if (key == "threads") cfg.threads = detail::parse_int(name, value);
        else throw Error(ErrorKind::ConfigError, source + ": unknown key " + name);
      } else {
        throw Error(ErrorKind::ConfigError, source + ": unknown section [" + section + "]");
      }
    }
  }
  cfg.validate();
  return cfg;
}

inline Config load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path.string());
  return parse_config(in, path.string());
}

inline constexpr const char* default_config_name = "macroball.toml";
inline constexpr const char* config_env_var = "MACROBALL_CONFIG";

/// Effective config: explicit path, else $MACROBALL_CONFIG, else
/// ./macroball.toml if present, else built-in defaults (no externals).
inline Config load_effective_config(const std::optional<std::string>& explicit_path) {
  if (explicit_path) return load_config_file(*explicit_path);
  if (const char* env = std::getenv(config_env_var); env != nullptr && *env != '\0') return load_config_file(env);
  if (std::filesystem::exists(default_config_name)) return load_config_file(default_config_name);
  return Config{};
}

/// Canonical JSON of the effective configuration.
inline Json config_json(const Config& c) {
  Json j;
  j["numerics"] = {{"rel", c.quad.rel}, {"abs", c.quad.abs}, {"max_depth", c.quad.max_depth}};
  j["extremal"] = {{"tol", c.ray.tol}, {"max_ray_cut", c.ray.max_ray_cut}, {"grid_density", c.ray.grid_density}};
  j["kernel"] = {{"tv_rel", c.tv.rel}, {"tv_abs", c.tv.abs}, {"tv_max_depth", c.tv.max_depth}};
  j["grid"] = {{"dims", c.grid.dims}, {"r_values", c.grid.r_values}, {"lambda_values", c.grid.lambda_values}};
  Json croke = Json::object();
  for (const auto& [n, v] : c.externals.croke_cprime) croke[std::to_string(n)] = v;
  Json simplex = Json::object();
  for (const auto& [n, v] : c.externals.ideal_simplex_vol_override) simplex[std::to_string(n)] = v;
  j["croke_cprime"] = croke;
  j["ideal_simplex_vol_override"] = simplex;
  j["output"] = {{"format", c.output.format}, {"path", c.output.path}};
  j["verify"] = {{"threads", c.threads}};
  return j;
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::ConfigError, "SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

inline std::string config_digest(const Config& c) { return "sha256:" + sha256_hex(dump_json(config_json(c), -1)); }

}  // namespace macroball
