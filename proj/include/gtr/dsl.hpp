#pragma once

// API-call grammar embedded in natural-language statements:
//
//   statement := (text | '[' call ('-->' ident?)? ']')*
//   call      := ident '(' (arg (',' arg)*)? ')'
//   arg       := call | string | set | entityref | number | bare
//   set       := '{' (arg (',' arg)*)? '}'
//   entityref := ident '#' id        id chars: [A-Za-z0-9_./-]
//
// A '[' that does not open a call attempt (identifier followed by '(') is
// always literal text. A failed call attempt is text plus a diagnostic in
// tolerant mode and a ParseError in strict mode.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gtr/error.hpp"

namespace gtr::dsl {

struct ApiCall;
struct ApiArg;

struct QuotedString {
  std::string value;
  bool operator==(const QuotedString&) const = default;
};

struct EntityRef {
  std::string kind;
  std::string id;
  bool operator==(const EntityRef&) const = default;
};

struct Number {
  std::string text;  // source spelling, preserved for serialization
  double value = 0.0;
  bool operator==(const Number& other) const { return text == other.text; }
};

struct Bare {
  std::string text;
  bool operator==(const Bare&) const = default;
};

/// `{a, b}`, or `(a, b)` when `tuple` is set (link pairs such as `{(u, v)}`).
struct SetLiteral {
  std::vector<ApiArg> items;
  bool tuple = false;
  bool operator==(const SetLiteral& other) const;
};

/// Owning, deep-copying box for a nested call.
class Nested {
 public:
  explicit Nested(ApiCall call);
  Nested(const Nested& other);
  Nested(Nested&&) noexcept = default;
  Nested& operator=(const Nested& other);
  Nested& operator=(Nested&&) noexcept = default;
  ~Nested();

  const ApiCall& call() const { return *call_; }
  ApiCall& call() { return *call_; }

  bool operator==(const Nested& other) const;

 private:
  std::unique_ptr<ApiCall> call_;
};

struct ApiArg {
  std::variant<Nested, QuotedString, EntityRef, SetLiteral, Number, Bare> value;

  bool operator==(const ApiArg&) const = default;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&value);
  }
};

struct ApiCall {
  std::string func;
  std::vector<ApiArg> args;
  bool insert_output = false;
  std::optional<std::string> result_name;

  bool operator==(const ApiCall&) const = default;
};

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct TextSegment {
  std::string content;
  bool operator==(const TextSegment&) const = default;
};

struct CallSegment {
  ApiCall call;
  bool operator==(const CallSegment&) const = default;
};

struct Segment {
  std::variant<TextSegment, CallSegment> kind;
  Span span;

  bool is_call() const { return std::holds_alternative<CallSegment>(kind); }
};

struct Statement {
  std::vector<Segment> segments;
  std::string raw_text;
};

/// Same segment kinds and contents, ignoring source offsets.
bool structurally_equal(const Statement& a, const Statement& b);

struct ParsedQuery {
  ApiCall call;
  std::vector<bool> insert_flags;
  Span source_span;
};

struct Diagnostic {
  std::size_t offset = 0;
  std::string message;
  std::vector<std::string> expected;
};

enum class ParseMode { Tolerant, Strict };

struct ParseResult {
  Statement statement;
  std::vector<Diagnostic> diagnostics;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
      : Error(ErrorCode::ParseError, message), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

ParseResult parse(std::string_view text, ParseMode mode = ParseMode::Tolerant);

/// Tolerant parse, diagnostics dropped.
Statement parse_statement(std::string_view text);

/// Parses exactly one bracketed call, e.g. `[GR(GL("cora"), "toolx:order")-->r]`.
/// Throws ParseError on anything else.
ApiCall parse_call(std::string_view text);

std::vector<ParsedQuery> extract_queries(const Statement& stmt);

/// Bracketed canonical form with `-->name` iff insert_output.
std::string serialize(const ApiCall& call);

/// Unbracketed call expression, as it appears when nested.
std::string serialize_expression(const ApiCall& call);

std::string serialize_arg(const ApiArg& arg);

/// Text segments verbatim, calls in canonical form.
std::string serialize(const Statement& stmt);

/// Like serialize, with function and domain:function names lowercased and
/// the result name dropped.
std::string canonicalize(const ApiCall& call);

/// Python-tuple rendering of a parsed query, e.g.
/// `(('GR', [('GL', ['cora']), 'graph_bert:topic', 'paper#83826']), [True])`.
std::string to_tuple_string(const ParsedQuery& query);

/// Maximum call/set nesting depth of a call tree (a flat call has depth 1).
std::size_t depth(const ApiCall& call);

bool is_identifier(std::string_view text);

}  // namespace gtr::dsl
