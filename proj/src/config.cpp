#include "gtr/config.hpp"

#include <cstdlib>
#include <fstream>

namespace gtr {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

template <typename T>
T number(const std::string& name, const std::string& text) {
  try {
    std::size_t used = 0;
    T v;
    if constexpr (std::is_floating_point_v<T>) {
      v = static_cast<T>(std::stod(text, &used));
    } else {
      auto x = std::stoll(text, &used);
      if (x < 0) config_error(name + " must be non-negative");
      v = static_cast<T>(x);
    }
    if (used != text.size()) config_error(name + ": trailing characters in '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    config_error(name + ": not a number: '" + text + "'");
  }
}

}  // namespace

AppConfig apply_config_json(AppConfig c, const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  try {
    if (doc.contains("registry")) {
      std::filesystem::path p = doc["registry"].get<std::string>();
      c.registry = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (doc.contains("memory_capacity")) c.memory_capacity = doc["memory_capacity"].get<std::size_t>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("host")) c.host = doc["host"].get<std::string>();
    if (doc.contains("port")) c.port = doc["port"].get<int>();
    if (doc.contains("endpoint")) {
      const auto& e = doc["endpoint"];
      auto& g = c.endpoint;
      if (e.contains("url")) g.endpoint_url = e["url"].get<std::string>();
      if (e.contains("dialect")) g.dialect = llm::dialect_from_string(e["dialect"].get<std::string>());
      if (e.contains("model")) g.model = e["model"].get<std::string>();
      if (e.contains("api_key")) g.api_key = e["api_key"].get<std::string>();
      if (e.contains("num_beams")) g.num_beams = e["num_beams"].get<int>();
      if (e.contains("top_k")) g.top_k = e["top_k"].get<int>();
      if (e.contains("top_p")) g.top_p = e["top_p"].get<double>();
      if (e.contains("temperature")) g.temperature = e["temperature"].get<double>();
      if (e.contains("max_length")) g.max_length = e["max_length"].get<int>();
      if (e.contains("timeout_ms")) g.timeout = std::chrono::milliseconds(e["timeout_ms"].get<long>());
      if (e.contains("retries")) g.retries = e["retries"].get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("bad config value: ") + e.what());
  }
  return c;
}

AppConfig apply_env(AppConfig c, const EnvLookup& env) {
  if (auto v = env("GTR_REGISTRY")) c.registry = *v;
  if (auto v = env("GTR_MEMORY_CAPACITY")) c.memory_capacity = number<std::size_t>("GTR_MEMORY_CAPACITY", *v);
  if (auto v = env("GTR_SEED")) c.seed = number<std::uint64_t>("GTR_SEED", *v);
  if (auto v = env("GTR_HOST")) c.host = *v;
  if (auto v = env("GTR_PORT")) c.port = number<int>("GTR_PORT", *v);
  if (auto v = env("GTR_ENDPOINT")) c.endpoint.endpoint_url = *v;
  if (auto v = env("GTR_ENDPOINT_DIALECT")) c.endpoint.dialect = llm::dialect_from_string(*v);
  if (auto v = env("GTR_ENDPOINT_MODEL")) c.endpoint.model = *v;
  if (auto v = env("GTR_API_KEY")) c.endpoint.api_key = *v;
  if (auto v = env("GTR_TIMEOUT_MS")) c.endpoint.timeout = std::chrono::milliseconds(number<long>("GTR_TIMEOUT_MS", *v));
  if (auto v = env("GTR_RETRIES")) c.endpoint.retries = number<int>("GTR_RETRIES", *v);
  return c;
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str()); v && *v) return std::string(v);
  return std::nullopt;
}

AppConfig load_config(const std::optional<std::filesystem::path>& path, const EnvLookup& env) {
  AppConfig c;
  std::optional<std::filesystem::path> file = path;
  if (!file) {
    if (auto v = env("GTR_CONFIG")) {
      file = *v;
    } else if (std::filesystem::exists("gtr.json")) {
      file = "gtr.json";
    }
  }
  if (file) {
    std::ifstream in(*file);
    if (!in) config_error("cannot open config file " + file->string());
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      config_error(file->string() + ": " + e.what());
    }
    c = apply_config_json(std::move(c), doc, file->parent_path());
  }
  return apply_env(std::move(c), env);
}

}  // namespace gtr
