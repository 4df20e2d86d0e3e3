#pragma once

#include <filesystem>
#include <string>

#include "fsps/dynamics.hpp"

namespace fsps {

/// Parses an INI-style run description. Unknown sections or keys and values out
/// of range raise ConfigError naming the key and the accepted range. Relative
/// snapshot paths are resolved against `base_dir`.
SimConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Reads and parses a config file; a missing file raises InputError.
SimConfig load_config(const std::filesystem::path& path);

/// Effective configuration, one "section.key=value" line per setting, sorted.
std::string canonical_config(const SimConfig& cfg);

/// Hex SHA-256 of canonical_config(cfg).
std::string config_hash(const SimConfig& cfg);

/// Key reference with defaults and ranges, as printed by --help.
std::string config_reference();

/// Applies "section.key=value" on top of config text (used by parameter sweeps).
std::string override_config_text(const std::string& text, const std::string& dotted_key,
                                  const std::string& value);

}  // namespace fsps
