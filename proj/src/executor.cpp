#include "gtr/executor.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace gtr {

WorkingMemory::WorkingMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw Error(ErrorCode::ConfigError, "working memory capacity must be at least 1");
}

std::optional<ReasoningValue> WorkingMemory::get(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void WorkingMemory::put(const std::string& key, ReasoningValue value) {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    it->second = std::move(value);
    return;
  }
  if (order_.size() == capacity_) {
    entries_.erase(order_.front());
    order_.pop_front();
  }
  order_.push_back(key);
  entries_.emplace(key, std::move(value));
}

bool WorkingMemory::contains(const std::string& key) const {
  std::lock_guard lock(mutex_);
  return entries_.count(key) > 0;
}

std::size_t WorkingMemory::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::vector<std::string> WorkingMemory::keys() const {
  std::lock_guard lock(mutex_);
  return {order_.begin(), order_.end()};
}

void WorkingMemory::clear() {
  std::lock_guard lock(mutex_);
  order_.clear();
  entries_.clear();
}

std::string memory_key(const dsl::ApiCall& call) {
  dsl::ApiCall plain = call;
  plain.insert_output = false;
  plain.result_name.reset();
  return dsl::canonicalize(plain);
}

Json diagnostics_to_json(const std::vector<CallDiagnostic>& diagnostics) {
  Json out = Json::array();
  for (const auto& d : diagnostics) {
    out.push_back({{"span", {d.span.start, d.span.end}},
                   {"canonical_query", d.canonical_query},
                   {"error_code", d.error_code},
                   {"message", d.message}});
  }
  return out;
}

std::string joined_results(const std::vector<std::string>& rendered) {
  std::string out;
  for (std::size_t i = 0; i < rendered.size(); ++i) out += (i ? "; " : "") + rendered[i];
  return out;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Replaces bare arguments naming an earlier `-->name` result with that call.
dsl::ApiCall substitute(const dsl::ApiCall& call, const std::map<std::string, dsl::ApiCall>& env) {
  dsl::ApiCall out = call;
  for (auto& arg : out.args) {
    if (auto* nested = std::get_if<dsl::Nested>(&arg.value)) {
      nested->call() = substitute(nested->call(), env);
    } else if (const auto* bare = arg.as<dsl::Bare>()) {
      auto it = env.find(bare->text);
      if (it != env.end()) arg.value = dsl::Nested(it->second);
    }
  }
  return out;
}

}  // namespace

GraphHandle Executor::evaluate_graph(const dsl::ApiArg& arg) {
  if (const auto* nested = arg.as<dsl::Nested>()) {
    auto v = evaluate(nested->call());
    if (const auto* ref = std::get_if<GraphRef>(&v)) return ref->handle;
    throw Error(ErrorCode::ArityError, "GR expects a graph as its first argument, got a " + kind_name(v));
  }
  if (arg.as<dsl::QuotedString>() || arg.as<dsl::Bare>()) {
    auto name = *text_of(arg);
    data_.load(name);
    return GraphHandle{name, WholeGraph{}};
  }
  throw Error(ErrorCode::ArityError, "GR expects a graph as its first argument");
}

ReasoningValue Executor::evaluate(const dsl::ApiCall& call) {
  const auto family = lower(call.func);
  if (family == "gl") {
    dsl::ApiCall gl = call;
    gl.func = "GL";
    auto handle = execute_gl(gl, data_);
    ++calls_;
    return GraphRef{std::move(handle)};
  }
  if (family != "gr") {
    throw Error(ErrorCode::UnknownFunction, "unknown call '" + call.func + "'; expected GL or GR");
  }
  if (call.args.size() < 2) {
    throw Error(ErrorCode::ArityError, "GR expects (graph, \"domain:function\", ...), got " +
                                           std::to_string(call.args.size()) + " argument(s)");
  }
  auto handle = evaluate_graph(call.args[0]);
  const auto& fn_arg = call.args[1];
  auto fn = (fn_arg.as<dsl::QuotedString>() || fn_arg.as<dsl::Bare>()) ? text_of(fn_arg) : std::nullopt;
  if (!fn) throw Error(ErrorCode::ArityError, "GR's second argument must be a \"domain:function\" string");
  const auto& descriptor = models_.registry().resolve(*fn);

  std::vector<dsl::ApiArg> rest;
  for (std::size_t i = 2; i < call.args.size(); ++i) {
    if (const auto* nested = call.args[i].as<dsl::Nested>()) {
      rest.push_back(dsl::ApiArg{dsl::Bare{render(evaluate(nested->call()))}});
    } else {
      rest.push_back(call.args[i]);
    }
  }
  auto bound = hub::bind_arguments(descriptor, rest);
  ++calls_;
  hub::CallContext ctx(std::move(handle), data_, models_, std::move(bound));
  return descriptor.invoke(ctx);
}

ReasoningValue Executor::execute(const dsl::ApiCall& call, WorkingMemory* memory) {
  const auto key = memory_key(call);
  if (memory) {
    if (auto hit = memory->get(key)) return *hit;
  }
  ReasoningValue value;
  try {
    value = evaluate(call);
  } catch (const ExecutionError&) {
    throw;
  } catch (const Error& e) {
    throw ExecutionError(key, e);
  } catch (const std::exception& e) {
    throw ExecutionError(key, Error(ErrorCode::Malformed, e.what()));
  }
  if (memory) memory->put(key, value);
  return value;
}

ReasoningValue Executor::execute(const dsl::ParsedQuery& query, WorkingMemory* memory) {
  return execute(query.call, memory);
}

PostProcessResult Executor::post_process(const dsl::Statement& stmt, WorkingMemory* memory) {
  PostProcessResult out;
  std::map<std::string, dsl::ApiCall> env;
  for (const auto& seg : stmt.segments) {
    if (const auto* text = std::get_if<dsl::TextSegment>(&seg.kind)) {
      out.text += text->content;
      continue;
    }
    const auto& call = std::get<dsl::CallSegment>(seg.kind).call;
    auto expanded = substitute(call, env);
    try {
      auto value = execute(expanded, memory);
      if (call.insert_output) {
        out.results.push_back(render(value));
        out.text += out.results.back();
      }
      if (call.result_name) {
        expanded.insert_output = false;
        expanded.result_name.reset();
        env[*call.result_name] = expanded;
      }
    } catch (const Error& e) {
      auto code = std::string(code_name(e.code()));
      out.diagnostics.push_back({seg.span, memory_key(expanded), code, e.what(), e.code()});
      if (call.insert_output) out.text += "<reasoning-error: " + code + ">";
    }
  }
  return out;
}

}  // namespace gtr
