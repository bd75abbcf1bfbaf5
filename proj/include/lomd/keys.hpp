#pragma once

#include <map>
#include <string>
#include <string_view>

#include "lomd/domain.hpp"
#include "lomd/vector.hpp"

namespace lomd {

/// name[:k=v,k=v][@domain]
struct ParsedKey {
  std::string name;
  std::map<std::string, std::string> params;
  std::string domain;
};

ParsedKey split_key(std::string_view key);

/// "halfline", "interval", "simplex:d=3", "ball:d=2", "full:d=2".
Domain parse_domain(std::string_view key);

double parse_double(std::string_view text, std::string_view what);
/// Pipe-separated coordinates, e.g. "0.2|0.8".
Point parse_point(std::string_view text, std::string_view what);

}  // namespace lomd
