#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lomd/harness.hpp"

namespace lomd::cli {

using KeyValues = std::map<std::string, std::string>;

/// Flat "key = value" lines; '#' starts a comment line. Duplicate keys and
/// lines without '=' are ConfigError, reported with source and line number.
KeyValues parse_key_values(std::istream& in, const std::string& source);
KeyValues read_key_value_file(const std::filesystem::path& path);

/// Comments first (as "# ..."), then sorted key=value lines.
void write_manifest(std::ostream& out, const KeyValues& values, const std::vector<std::string>& comments);

struct RunSettings {
  ExperimentConfig experiment;
  std::string out_dir = "out";
  bool plot = false;
};

/// Every key accepted by `run` configs.
const std::vector<std::string>& run_keys();
/// Defaults for every key except geometry, which has to be supplied.
KeyValues run_defaults();

/// Throws ConfigError naming the key for unknown keys, a missing geometry,
/// or malformed values.
RunSettings resolve_run(const KeyValues& values);
/// Merges `layer` over `base`, rejecting keys outside run_keys().
void merge_layer(KeyValues& base, const KeyValues& layer, const std::string& source);

/// LEGENDRE_OMD_SEED, if set. ConfigError if it is not an unsigned integer.
std::optional<std::uint64_t> env_seed();

std::uint64_t parse_u64(const std::string& text, const std::string& key);

}  // namespace lomd::cli
