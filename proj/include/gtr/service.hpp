#pragma once

// The reason/infer pipeline shared by the command line and the HTTP service,
// so both produce byte-identical statements for the same input.
//
// HTTP endpoints (JSON bodies, UTF-8):
//   POST /reason  {"statement": str, "tolerant": bool?}  -> {"output": str, "diagnostics": [..]}
//   POST /infer   {"input": str, "tolerant": bool?}      -> {"output": str, "completion": str, "diagnostics": [..]}
//   GET  /catalog                                        -> {"functions": [..], "datasets": [..]}
//   GET  /health                                         -> "ok"
// Failures answer {"error": code, "message": str, "diagnostics": [..]} with
// 400 (parse or bad request), 404 (unknown dataset or function),
// 422 (other execution errors), 502 (completion endpoint).

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "gtr/config.hpp"
#include "gtr/executor.hpp"
#include "gtr/llm_client.hpp"

namespace httplib {
class Server;
}

namespace gtr {

struct ReasonOutcome {
  std::string output;
  std::string completion;  // infer only: the raw endpoint text
  Json diagnostics = Json::array();
  std::optional<ErrorCode> failure;  // first error that makes a strict run fail

  bool ok() const { return !failure.has_value(); }
};

/// CLI exit status: 0 ok, 2 parse, 3 execution, 4 data, 5 endpoint, 1 usage.
int exit_code(ErrorCode code);
/// HTTP status for a failed request.
int http_status(ErrorCode code);

class Pipeline {
 public:
  Pipeline(DataHub& data, hub::ModelHub& models, std::size_t memory_capacity = 128);

  /// Parse, execute and post-process. Strict runs stop at the first parse
  /// error and flag any failed call; tolerant runs keep malformed brackets
  /// as text and never fail.
  ReasonOutcome reason(const std::string& statement, bool tolerant = false);

  /// Annotates `input` through the completion endpoint, then reasons over
  /// the completion.
  ReasonOutcome infer(const std::string& input, llm::Client& client, bool tolerant = false);

  Json catalog() const;

  Executor& executor() { return executor_; }
  WorkingMemory& memory() { return memory_; }

 private:
  DataHub& data_;
  hub::ModelHub& models_;
  Executor executor_;
  WorkingMemory memory_;
};

class Service {
 public:
  /// `client` may be null; /infer then answers 502.
  Service(Pipeline& pipeline, std::shared_ptr<llm::Client> client);
  ~Service();

  /// Dispatch without a socket: returns (status, body, content type).
  struct Response {
    int status;
    std::string body;
    std::string content_type;
  };
  Response handle(const std::string& method, const std::string& path, const std::string& body);

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready();

 private:
  Pipeline& pipeline_;
  std::shared_ptr<llm::Client> client_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace gtr
