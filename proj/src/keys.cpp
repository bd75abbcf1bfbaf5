#include "lomd/keys.hpp"

#include <charconv>
#include <set>
#include <vector>

#include <fmt/format.h>

#include "lomd/error.hpp"
#include "lomd/geometry.hpp"
#include "lomd/problems.hpp"

namespace lomd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void allow_only(const ParsedKey& k, std::set<std::string> allowed) {
  for (const auto& [name, value] : k.params)
    if (!allowed.count(name))
      throw ConfigError(fmt::format("unknown parameter '{}' for '{}'", name, k.name));
}

double required(const ParsedKey& k, const std::string& param) {
  auto it = k.params.find(param);
  if (it == k.params.end()) throw ConfigError(fmt::format("'{}' requires parameter '{}'", k.name, param));
  return parse_double(it->second, param);
}

double optional(const ParsedKey& k, const std::string& param, double fallback) {
  auto it = k.params.find(param);
  return it == k.params.end() ? fallback : parse_double(it->second, param);
}

}  // namespace

ParsedKey split_key(std::string_view key) {
  key = trim(key);
  if (key.empty()) throw ConfigError("empty key");
  ParsedKey out;
  if (auto at = key.find('@'); at != std::string_view::npos) {
    out.domain = std::string(trim(key.substr(at + 1)));
    key = key.substr(0, at);
  }
  std::string_view params;
  if (auto colon = key.find(':'); colon != std::string_view::npos) {
    params = key.substr(colon + 1);
    key = key.substr(0, colon);
  }
  out.name = std::string(trim(key));
  if (out.name.empty()) throw ConfigError("key has no name");
  while (!params.empty()) {
    const auto comma = params.find(',');
    const std::string_view item = trim(params.substr(0, comma));
    params = comma == std::string_view::npos ? std::string_view{} : params.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ConfigError(fmt::format("malformed parameter '{}' in key '{}'", item, out.name));
    out.params[std::string(trim(item.substr(0, eq)))] = std::string(trim(item.substr(eq + 1)));
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(fmt::format("'{}' is not a number for '{}'", text, what));
  return v;
}

Point parse_point(std::string_view text, std::string_view what) {
  std::vector<double> coords;
  while (true) {
    const auto bar = text.find('|');
    coords.push_back(parse_double(text.substr(0, bar), what));
    if (bar == std::string_view::npos) break;
    text = text.substr(bar + 1);
  }
  return Point(std::span<const double>(coords));
}

Domain parse_domain(std::string_view key) {
  const ParsedKey k = split_key(key);
  if (!k.domain.empty()) throw ConfigError(fmt::format("domain key '{}' cannot carry '@'", key));
  const auto dim = [&]() -> std::size_t {
    allow_only(k, {"d"});
    const double d = required(k, "d");
    if (!(d >= 1.0) || d != static_cast<double>(static_cast<std::size_t>(d)))
      throw ConfigError(fmt::format("domain dimension must be a positive integer, got {}", d));
    return static_cast<std::size_t>(d);
  };
  if (k.name == "halfline") {
    allow_only(k, {});
    return Domain::half_line();
  }
  if (k.name == "interval") {
    allow_only(k, {});
    return Domain::unit_interval();
  }
  if (k.name == "simplex") return Domain::simplex(dim());
  if (k.name == "ball") return Domain::unit_ball(dim());
  if (k.name == "full") return Domain::full_space(dim());
  throw ConfigError(fmt::format("unknown domain '{}'", k.name));
}

GeometrySpec parse_geometry(std::string_view key) {
  const ParsedKey k = split_key(key);
  const auto domain = [&](std::string_view fallback) {
    return parse_domain(k.domain.empty() ? fallback : std::string_view(k.domain));
  };
  if (k.name == "euclidean") {
    allow_only(k, {});
    return GeometrySpec(Euclidean{}, domain("halfline"));
  }
  if (k.name == "entropy") {
    allow_only(k, {});
    return GeometrySpec(NegEntropy{}, domain("halfline"));
  }
  if (k.name == "tsallis") {
    allow_only(k, {"q"});
    return GeometrySpec(Tsallis{required(k, "q")}, domain("halfline"));
  }
  if (k.name == "fracpow") {
    allow_only(k, {"p"});
    return GeometrySpec(FractionalPower{required(k, "p")}, domain("halfline"));
  }
  if (k.name == "sqrt") {
    allow_only(k, {});
    return GeometrySpec(SquareRoot{}, domain("halfline"));
  }
  if (k.name == "hellinger") {
    allow_only(k, {});
    return GeometrySpec(Hellinger{}, domain("ball:d=1"));
  }
  throw ConfigError(fmt::format("unknown geometry '{}'", k.name));
}

ProblemSpec parse_problem(std::string_view key) {
  const ParsedKey k = split_key(key);
  const auto solution = [&](std::size_t d) {
    auto it = k.params.find("xstar");
    Point s = it == k.params.end() ? Point(d, 0.0) : parse_point(it->second, "xstar");
    if (s.size() != d) throw ConfigError("xstar dimension does not match the domain");
    return s;
  };
  if (k.name == "linear1d") {
    allow_only(k, {"lambda", "xstar"});
    const Domain dom = parse_domain(k.domain.empty() ? "halfline" : k.domain);
    return ProblemSpec(Linear1D{optional(k, "lambda", 1.0)}, dom, solution(dom.dimension()));
  }
  if (k.name == "affine") {
    allow_only(k, {"a", "xstar"});
    auto it = k.params.find("a");
    if (it == k.params.end()) throw ConfigError("'affine' requires parameter 'a'");
    Point a = parse_point(it->second, "a");
    const Domain dom =
        k.domain.empty() ? Domain::full_space(a.size()) : parse_domain(k.domain);
    return ProblemSpec(AffineDiag{std::move(a)}, dom, solution(dom.dimension()));
  }
  if (k.name == "bilinear") {
    allow_only(k, {"a", "mu", "xstar"});
    const Domain dom = parse_domain(k.domain.empty() ? "full:d=2" : k.domain);
    return ProblemSpec(BilinearSaddle{optional(k, "a", 1.0), optional(k, "mu", 0.0)}, dom,
                       solution(dom.dimension()));
  }
  throw ConfigError(fmt::format("unknown problem '{}'", k.name));
}

}  // namespace lomd
