#include "lomd/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lomd/error.hpp"
#include "lomd/geometry.hpp"
#include "lomd/keys.hpp"
#include "lomd/problems.hpp"

namespace lomd::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("key '{}': '{}' is not a boolean", key, v));
}

double number(const KeyValues& kv, const std::string& key) { return parse_double(kv.at(key), key); }

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("{}:{}: expected key=value, got '{}'", source, lineno, t));
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", source, lineno));
    if (!out.emplace(key, trim(t.substr(eq + 1))).second)
      throw ConfigError(fmt::format("{}:{}: duplicate key '{}'", source, lineno, key));
  }
  return out;
}

KeyValues read_key_value_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
  return parse_key_values(f, path.string());
}

void write_manifest(std::ostream& out, const KeyValues& values, const std::vector<std::string>& comments) {
  for (const auto& c : comments) fmt::print(out, "# {}\n", c);
  for (const auto& [k, v] : values) fmt::print(out, "{}={}\n", k, v);
}

const std::vector<std::string>& run_keys() {
  static const std::vector<std::string> keys{"problem", "geometry", "gamma", "t0",   "eta",
                                             "T",       "sigma2",   "trials", "x_init", "t_lo",
                                             "t_hi",    "seed",     "threads", "out",  "plot"};
  return keys;
}

KeyValues run_defaults() {
  const ExperimentConfig d;
  return {{"problem", d.problem},
          {"gamma", "1"},
          {"t0", "0"},
          {"eta", "1"},
          {"T", "100000"},
          {"sigma2", "0.0001"},
          {"trials", "100"},
          {"x_init", "0.1"},
          {"t_lo", "0"},
          {"t_hi", "0"},
          {"seed", std::to_string(d.seed)},
          {"threads", "0"},
          {"out", "out"},
          {"plot", "false"}};
}

void merge_layer(KeyValues& base, const KeyValues& layer, const std::string& source) {
  const auto& keys = run_keys();
  for (const auto& [k, v] : layer) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw ConfigError(fmt::format("{}: unknown key '{}'", source, k));
    base[k] = v;
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  std::uint64_t v = 0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(fmt::format("key '{}': '{}' is not an unsigned integer", key, text));
  return v;
}

RunSettings resolve_run(const KeyValues& values) {
  KeyValues kv = run_defaults();
  merge_layer(kv, values, "config");
  if (!kv.count("geometry") || kv.at("geometry").empty())
    throw ConfigError("missing required key 'geometry'");
  RunSettings s;
  ExperimentConfig& e = s.experiment;
  e.problem = kv.at("problem");
  e.geometry = kv.at("geometry");
  e.gamma = number(kv, "gamma");
  e.t0 = number(kv, "t0");
  e.eta = number(kv, "eta");
  e.T = parse_u64(kv.at("T"), "T");
  e.sigma2 = number(kv, "sigma2");
  e.trials = parse_u64(kv.at("trials"), "trials");
  e.x_init = parse_point(kv.at("x_init"), "x_init");
  e.t_lo = parse_u64(kv.at("t_lo"), "t_lo");
  e.t_hi = parse_u64(kv.at("t_hi"), "t_hi");
  e.seed = parse_u64(kv.at("seed"), "seed");
  e.threads = static_cast<int>(parse_u64(kv.at("threads"), "threads"));
  s.out_dir = kv.at("out");
  s.plot = parse_bool(kv.at("plot"), "plot");
  // Key syntax is checked here so the error can name the key.
  try {
    (void)parse_geometry(e.geometry);
  } catch (const ConfigError& err) {
    throw ConfigError(fmt::format("key 'geometry': {}", err.what()));
  }
  try {
    (void)parse_problem(e.problem);
  } catch (const ConfigError& err) {
    throw ConfigError(fmt::format("key 'problem': {}", err.what()));
  }
  e.validate();
  return s;
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("LEGENDRE_OMD_SEED");
  if (!v || !*v) return std::nullopt;
  return parse_u64(v, "LEGENDRE_OMD_SEED");
}

}  // namespace lomd::cli
