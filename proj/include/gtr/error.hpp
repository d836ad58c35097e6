#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gtr {

enum class ErrorCode {
  ParseError,
  NotFound,
  SchemaError,
  InvariantViolation,
  UnknownNode,
  UnknownLink,
  UnknownInstance,
  UnknownUser,
  UnknownItem,
  UnknownEntity,
  UnknownRelation,
  UnknownFunction,
  Malformed,
  DuplicateKey,
  ArityError,
  DegenerateGraph,
  DisconnectedGraph,
  NoPath,
  EmptyGraph,
  BadK,
  NotBipartite,
  EmptyTraining,
  MissingRelationLabels,
  NoLabeledNodes,
  EmptyTrainingSet,
  SlotUnfillable,
  TemplateParseError,
  TooFewPairs,
  LengthMismatch,
  Timeout,
  EndpointError,
  Unavailable,
  ConfigError,
};

/// Coarse grouping used for CLI exit codes and HTTP status mapping.
enum class ErrorCategory { Parse, Execution, Data, Endpoint, Usage };

std::string_view code_name(ErrorCode code);
ErrorCategory category_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

/// A module error raised while executing a query; keeps the canonical query
/// text and the original cause code.
class ExecutionError : public Error {
 public:
  ExecutionError(std::string query, const Error& cause)
      : Error(cause.code(), cause.what()), query_(std::move(query)) {}

  const std::string& query() const noexcept { return query_; }

 private:
  std::string query_;
};

/// Dataset validation failure listing every violated invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(ErrorCode::InvariantViolation, join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid dataset: ";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += "; ";
      out += items[i];
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace gtr
