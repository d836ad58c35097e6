#pragma once

// Query execution, the FIFO working memory, and statement post-processing.

#include <atomic>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gtr/dsl.hpp"
#include "gtr/graph_store.hpp"
#include "gtr/model_hub.hpp"
#include "gtr/value.hpp"

namespace gtr {

/// Bounded canonical-query → value cache. Eviction is FIFO by first
/// insertion; rewriting an existing key refreshes its value in place without
/// moving it in the queue. Mutations are serialized internally.
class WorkingMemory {
 public:
  explicit WorkingMemory(std::size_t capacity = 128);

  std::optional<ReasoningValue> get(const std::string& key) const;
  void put(const std::string& key, ReasoningValue value);
  bool contains(const std::string& key) const;
  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::vector<std::string> keys() const;  // oldest first
  void clear();

 private:
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::deque<std::string> order_;
  std::unordered_map<std::string, ReasoningValue> entries_;
};

/// Cache key for a call: canonical form without the output tag, so `[..]`
/// and `[..-->r]` share an entry.
std::string memory_key(const dsl::ApiCall& call);

struct CallDiagnostic {
  dsl::Span span;
  std::string canonical_query;
  std::string error_code;
  std::string message;
  ErrorCode code = ErrorCode::Malformed;
};

Json diagnostics_to_json(const std::vector<CallDiagnostic>& diagnostics);

struct PostProcessResult {
  std::string text;
  std::vector<std::string> results;  // rendered value of each `-->` call, in order
  std::vector<CallDiagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

class Executor {
 public:
  Executor(DataHub& data, hub::ModelHub& models) : data_(data), models_(models) {}

  /// Evaluates nested arguments innermost-first. With a memory, a hit on the
  /// canonical query returns the stored value without dispatching. Module
  /// errors surface as ExecutionError.
  ReasoningValue execute(const dsl::ParsedQuery& query, WorkingMemory* memory = nullptr);
  ReasoningValue execute(const dsl::ApiCall& call, WorkingMemory* memory = nullptr);

  /// Replaces every `-->` call with its rendered value; untagged calls run
  /// and leave no text; failures render as `<reasoning-error: Code>`.
  PostProcessResult post_process(const dsl::Statement& stmt, WorkingMemory* memory = nullptr);

  /// Number of GL/GR dispatches performed (cache hits excluded).
  std::size_t call_count() const { return calls_.load(); }

  DataHub& data() { return data_; }
  hub::ModelHub& models() { return models_; }

 private:
  ReasoningValue evaluate(const dsl::ApiCall& call);
  GraphHandle evaluate_graph(const dsl::ApiArg& arg);

  DataHub& data_;
  hub::ModelHub& models_;
  std::atomic<std::size_t> calls_{0};
};

/// Rendering of every `-->` call of an output statement, joined by "; "
/// (the reasoning_result of a prompt pair).
std::string joined_results(const std::vector<std::string>& rendered);

}  // namespace gtr
