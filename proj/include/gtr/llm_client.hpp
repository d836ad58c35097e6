#pragma once

// Client for an external completion endpoint that turns a plain statement
// into one annotated with API calls.
//
// Native wire format (POST <endpoint_url>, Content-Type: application/json):
//   request  {"prompt": str, "num_beams": int, "top_k": int, "top_p": float,
//             "temperature": float, "max_length": int}
//   response {"text": str}
// The "openai" dialect posts {"model", "prompt", "max_tokens", "temperature",
// "top_p"} and reads choices[0].text.

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "gtr/graph_store.hpp"

namespace gtr::llm {

enum class Dialect { Native, OpenAI };

struct GenerationConfig {
  std::string endpoint_url;
  Dialect dialect = Dialect::Native;
  std::string model;    // openai dialect only
  std::string api_key;  // sent as a Bearer token when non-empty
  int num_beams = 5;
  int top_k = 5;
  double top_p = 0.95;
  double temperature = 1.9;
  int max_length = 128;
  std::chrono::milliseconds timeout{30000};
  int retries = 2;  // extra attempts after the first

  /// Throws ConfigError on an empty URL or out-of-range parameters.
  void validate() const;
};

Dialect dialect_from_string(const std::string& name);
std::string to_string(Dialect d);

/// Request body for `input` under the configured dialect.
Json request_body(const std::string& input, const GenerationConfig& cfg);

/// Completion text from a response body; EndpointError when malformed.
std::string completion_text(const std::string& body, const GenerationConfig& cfg);

class Client {
 public:
  explicit Client(GenerationConfig cfg, int max_in_flight = 4);

  /// The endpoint's completion, byte for byte. Transport failures are
  /// retried; 5xx answers are retried, 4xx are not. Throws EndpointError
  /// (status and body in the message), Timeout, or Unavailable.
  std::string annotate(const std::string& input);

  const GenerationConfig& config() const { return cfg_; }

 private:
  GenerationConfig cfg_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

std::string annotate(const std::string& input, const GenerationConfig& cfg);

}  // namespace gtr::llm
