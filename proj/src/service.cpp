#include "gtr/service.hpp"

#include "httplib.h"

namespace gtr {

int exit_code(ErrorCode code) {
  switch (category_of(code)) {
    case ErrorCategory::Parse:
      return 2;
    case ErrorCategory::Execution:
      return 3;
    case ErrorCategory::Data:
      return 4;
    case ErrorCategory::Endpoint:
      return 5;
    case ErrorCategory::Usage:
      return 1;
  }
  return 1;
}

int http_status(ErrorCode code) {
  if (code == ErrorCode::NotFound || code == ErrorCode::UnknownFunction) return 404;
  switch (category_of(code)) {
    case ErrorCategory::Parse:
    case ErrorCategory::Usage:
      return 400;
    case ErrorCategory::Endpoint:
      return 502;
    case ErrorCategory::Data:
    case ErrorCategory::Execution:
      return 422;
  }
  return 500;
}

Pipeline::Pipeline(DataHub& data, hub::ModelHub& models, std::size_t memory_capacity)
    : data_(data), models_(models), executor_(data, models), memory_(memory_capacity) {}

ReasonOutcome Pipeline::reason(const std::string& statement, bool tolerant) {
  ReasonOutcome out;
  dsl::Statement stmt;
  if (tolerant) {
    auto parsed = dsl::parse(statement, dsl::ParseMode::Tolerant);
    for (const auto& d : parsed.diagnostics) {
      out.diagnostics.push_back({{"span", {d.offset, d.offset}},
                                 {"canonical_query", ""},
                                 {"error_code", "ParseError"},
                                 {"message", d.message}});
    }
    stmt = std::move(parsed.statement);
  } else {
    try {
      stmt = dsl::parse(statement, dsl::ParseMode::Strict).statement;
    } catch (const dsl::ParseError& e) {
      out.diagnostics.push_back({{"span", {e.offset(), e.offset()}},
                                 {"canonical_query", ""},
                                 {"error_code", "ParseError"},
                                 {"message", e.what()}});
      out.failure = ErrorCode::ParseError;
      return out;
    }
  }
  auto result = executor_.post_process(stmt, &memory_);
  out.output = std::move(result.text);
  for (auto& d : diagnostics_to_json(result.diagnostics)) out.diagnostics.push_back(std::move(d));
  if (!tolerant && !result.diagnostics.empty()) out.failure = result.diagnostics.front().code;
  return out;
}

ReasonOutcome Pipeline::infer(const std::string& input, llm::Client& client, bool tolerant) {
  std::string completion;
  try {
    completion = client.annotate(input);
  } catch (const Error& e) {
    ReasonOutcome out;
    out.diagnostics.push_back(
        {{"span", {0, 0}}, {"canonical_query", ""}, {"error_code", code_name(e.code())}, {"message", e.what()}});
    out.failure = e.code();
    return out;
  }
  auto out = reason(completion, tolerant);
  out.completion = std::move(completion);
  return out;
}

Json Pipeline::catalog() const {
  Json j = models_.registry().catalog();
  j["datasets"] = data_.registry().names();
  return j;
}

// ---------------------------------------------------------------------------

namespace {

Service::Response json_response(int status, const Json& j) { return {status, j.dump(), "application/json"}; }

Service::Response error_response(ErrorCode code, const std::string& message, const Json& diagnostics = Json::array()) {
  Json j;
  j["error"] = code_name(code);
  j["message"] = message;
  j["diagnostics"] = diagnostics;
  return json_response(http_status(code), j);
}

Service::Response outcome_response(const ReasonOutcome& o, bool with_completion) {
  if (o.failure) {
    std::string message = o.diagnostics.empty() ? std::string(code_name(*o.failure))
                                                : o.diagnostics.front().value("message", "");
    return error_response(*o.failure, message, o.diagnostics);
  }
  Json j;
  j["output"] = o.output;
  if (with_completion) j["completion"] = o.completion;
  j["diagnostics"] = o.diagnostics;
  return json_response(200, j);
}

}  // namespace

Service::Service(Pipeline& pipeline, std::shared_ptr<llm::Client> client)
    : pipeline_(pipeline), client_(std::move(client)), server_(std::make_unique<httplib::Server>()) {
  auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    auto r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server_->Get("/health", bridge);
  server_->Get("/catalog", bridge);
  server_->Post("/reason", bridge);
  server_->Post("/infer", bridge);
}

Service::~Service() { stop(); }

Service::Response Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  if (method == "GET" && path == "/health") return {200, "ok", "text/plain"};
  if (method == "GET" && path == "/catalog") return json_response(200, pipeline_.catalog());
  if (method != "POST" || (path != "/reason" && path != "/infer")) {
    return {404, R"({"error":"NotFound","message":"no such endpoint"})", "application/json"};
  }

  Json req;
  try {
    req = Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return error_response(ErrorCode::ConfigError, std::string("request body is not JSON: ") + e.what());
  }
  const char* field = path == "/reason" ? "statement" : "input";
  if (!req.is_object() || !req.contains(field) || !req[field].is_string()) {
    return error_response(ErrorCode::ConfigError, std::string("request needs a string \"") + field + "\"");
  }
  const bool tolerant = req.value("tolerant", false);
  const auto text = req[field].get<std::string>();

  try {
    if (path == "/reason") return outcome_response(pipeline_.reason(text, tolerant), false);
    if (!client_) return error_response(ErrorCode::Unavailable, "no completion endpoint configured");
    return outcome_response(pipeline_.infer(text, *client_, tolerant), true);
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  }
}

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Service::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void Service::wait_until_ready() { server_->wait_until_ready(); }

}  // namespace gtr
