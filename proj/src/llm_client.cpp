#include "gtr/llm_client.hpp"

#include <thread>

#include "httplib.h"

namespace gtr::llm {

void GenerationConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::ConfigError, what); };
  if (endpoint_url.empty()) bad("no endpoint URL configured");
  if (!(top_p > 0 && top_p <= 1)) bad("top_p must be in (0, 1]");
  if (!(temperature > 0)) bad("temperature must be positive");
  if (max_length < 1) bad("max_length must be at least 1");
  if (num_beams < 1 || top_k < 1) bad("num_beams and top_k must be at least 1");
  if (retries < 0) bad("retries must be non-negative");
  if (timeout.count() <= 0) bad("timeout must be positive");
}

Dialect dialect_from_string(const std::string& name) {
  if (name == "native") return Dialect::Native;
  if (name == "openai") return Dialect::OpenAI;
  throw Error(ErrorCode::ConfigError, "unknown endpoint dialect '" + name + "' (native, openai)");
}

std::string to_string(Dialect d) { return d == Dialect::Native ? "native" : "openai"; }

Json request_body(const std::string& input, const GenerationConfig& cfg) {
  Json j;
  if (cfg.dialect == Dialect::OpenAI) {
    j["model"] = cfg.model;
    j["prompt"] = input;
    j["max_tokens"] = cfg.max_length;
    j["temperature"] = cfg.temperature;
    j["top_p"] = cfg.top_p;
    return j;
  }
  j["prompt"] = input;
  j["num_beams"] = cfg.num_beams;
  j["top_k"] = cfg.top_k;
  j["top_p"] = cfg.top_p;
  j["temperature"] = cfg.temperature;
  j["max_length"] = cfg.max_length;
  return j;
}

std::string completion_text(const std::string& body, const GenerationConfig& cfg) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::EndpointError, "endpoint returned non-JSON body: " + body.substr(0, 200));
  }
  const Json* text = nullptr;
  if (cfg.dialect == Dialect::OpenAI) {
    if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
      const auto& c = j["choices"][0];
      if (c.contains("text")) text = &c["text"];
    }
  } else if (j.contains("text")) {
    text = &j["text"];
  }
  if (!text || !text->is_string()) {
    throw Error(ErrorCode::EndpointError, "endpoint response has no completion text: " + body.substr(0, 200));
  }
  return text->get<std::string>();
}

namespace {

struct Target {
  std::string origin;  // scheme://host:port
  std::string path;
};

Target split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool is_timeout(httplib::Error e) {
  return e == httplib::Error::Read || e == httplib::Error::Write || e == httplib::Error::ConnectionTimeout;
}

}  // namespace

Client::Client(GenerationConfig cfg, int max_in_flight)
    : cfg_(std::move(cfg)), slots_(std::make_unique<std::counting_semaphore<>>(std::max(1, max_in_flight))) {
  cfg_.validate();
}

std::string Client::annotate(const std::string& input) {
  slots_->acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{*slots_};

  const auto target = split_url(cfg_.endpoint_url);
  const auto body = request_body(input, cfg_).dump();
  httplib::Headers headers;
  if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

  const auto secs = cfg_.timeout.count() / 1000;
  const auto usecs = (cfg_.timeout.count() % 1000) * 1000;
  bool timed_out = false;
  std::string last;
  for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    httplib::Client cli(target.origin);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    auto res = cli.Post(target.path, headers, body, "application/json");
    if (!res) {
      timed_out = is_timeout(res.error());
      last = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) return completion_text(res->body, cfg_);
    auto msg = "endpoint answered " + std::to_string(res->status) + ": " + res->body.substr(0, 500);
    if (res->status < 500) throw Error(ErrorCode::EndpointError, msg);
    timed_out = false;
    last = msg;
  }
  const auto attempts = std::to_string(cfg_.retries + 1);
  if (timed_out) {
    throw Error(ErrorCode::Timeout, "endpoint " + cfg_.endpoint_url + " timed out after " + attempts + " attempt(s)");
  }
  throw Error(ErrorCode::Unavailable,
              "endpoint " + cfg_.endpoint_url + " unavailable after " + attempts + " attempt(s): " + last);
}

std::string annotate(const std::string& input, const GenerationConfig& cfg) {
  return Client(cfg, 1).annotate(input);
}

}  // namespace gtr::llm
