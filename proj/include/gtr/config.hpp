#pragma once

// Runtime configuration. Precedence: command-line flags > environment >
// config file > defaults.
//
// File (JSON):
//   { "registry": "data/registry.json", "memory_capacity": 128, "seed": 42,
//     "host": "127.0.0.1", "port": 8080,
//     "endpoint": { "url": "...", "dialect": "native", "model": "", "num_beams": 5, "top_k": 5,
//                   "top_p": 0.95, "temperature": 1.9, "max_length": 128,
//                   "timeout_ms": 30000, "retries": 2 } }
//
// Environment: GTR_CONFIG (file path), GTR_REGISTRY, GTR_MEMORY_CAPACITY,
// GTR_SEED, GTR_HOST, GTR_PORT, GTR_ENDPOINT, GTR_ENDPOINT_DIALECT,
// GTR_ENDPOINT_MODEL, GTR_API_KEY, GTR_TIMEOUT_MS, GTR_RETRIES.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "gtr/llm_client.hpp"

namespace gtr {

struct AppConfig {
  std::filesystem::path registry;  // empty: datasets are addressed by path
  std::size_t memory_capacity = 128;
  std::uint64_t seed = 42;
  std::string host = "127.0.0.1";
  int port = 8080;
  llm::GenerationConfig endpoint;
};

/// Applies a config document on top of `base`. Relative registry paths are
/// resolved against `base_dir`. Throws ConfigError.
AppConfig apply_config_json(AppConfig base, const Json& doc, const std::filesystem::path& base_dir = {});

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Applies GTR_* variables. Throws ConfigError on unparsable values.
AppConfig apply_env(AppConfig base, const EnvLookup& env);

std::optional<std::string> process_env(const std::string& name);

/// Defaults, then `path` (or GTR_CONFIG, or ./gtr.json when present), then
/// the environment.
AppConfig load_config(const std::optional<std::filesystem::path>& path, const EnvLookup& env = process_env);

}  // namespace gtr
