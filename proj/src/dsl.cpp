#include "gtr/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>
#include <sstream>

namespace gtr::dsl {

// ---------------------------------------------------------------------------
// Value types

Nested::Nested(ApiCall call) : call_(std::make_unique<ApiCall>(std::move(call))) {}
Nested::Nested(const Nested& other) : call_(std::make_unique<ApiCall>(*other.call_)) {}
Nested& Nested::operator=(const Nested& other) {
  if (this != &other) call_ = std::make_unique<ApiCall>(*other.call_);
  return *this;
}
Nested::~Nested() = default;
bool Nested::operator==(const Nested& other) const { return *call_ == *other.call_; }

bool SetLiteral::operator==(const SetLiteral& other) const {
  return tuple == other.tuple && items == other.items;
}

bool structurally_equal(const Statement& a, const Statement& b) {
  if (a.segments.size() != b.segments.size()) return false;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    if (!(a.segments[i].kind == b.segments[i].kind)) return false;
  }
  return true;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = static_cast<unsigned char>(text.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool is_ident_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || u == '_';
}

bool is_ident_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u == '_';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_bare_stop(char c) {
  switch (c) {
    case ',': case '(': case ')': case '[': case ']': case '{': case '}': case '"':
    case '\n':
      return true;
    default:
      return false;
  }
}

bool is_entity_id_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '.' || c == '/' || c == '-';
}

std::optional<EntityRef> match_entity(std::string_view token) {
  auto hash = token.find('#');
  if (hash == std::string_view::npos) return std::nullopt;
  auto kind = token.substr(0, hash);
  auto id = token.substr(hash + 1);
  if (!is_identifier(kind) || id.empty()) return std::nullopt;
  if (!std::all_of(id.begin(), id.end(), is_entity_id_char)) return std::nullopt;
  return EntityRef{std::string(kind), std::string(id)};
}

std::optional<Number> match_number(std::string_view token) {
  static const std::regex number_re(R"(^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$)");
  std::string text(token);
  if (!std::regex_match(text, number_re)) return std::nullopt;
  return Number{text, std::stod(text)};
}

struct Failure {
  std::size_t offset;
  std::vector<std::string> expected;
  std::string message;
};

class CallParser {
 public:
  explicit CallParser(std::string_view text) : text_(text) {}

  /// Whether position `pos` (just after '[') starts an identifier followed by '('.
  bool is_call_attempt(std::size_t pos) const {
    pos = skip_ws(pos);
    if (pos >= text_.size() || !is_ident_start(text_[pos])) return false;
    while (pos < text_.size() && is_ident_char(text_[pos])) ++pos;
    pos = skip_ws(pos);
    return pos < text_.size() && text_[pos] == '(';
  }

  /// Parses `call ('-->' ident?)? ']'` starting right after '['.
  /// On success returns the position just past ']'.
  std::size_t parse_bracket_body(std::size_t pos, ApiCall& out) {
    pos_ = pos;
    ws();
    out = call();
    ws();
    if (peek_string("-->")) {
      pos_ += 3;
      out.insert_output = true;
      ws();
      if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
        out.result_name = identifier();
      } else if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail({"identifier"}, "result name must start with a letter or '_'");
      }
      ws();
    }
    if (pos_ >= text_.size() || text_[pos_] != ']') {
      fail(out.insert_output ? std::vector<std::string>{"']'"}
                             : std::vector<std::string>{"'-->'", "']'"},
           "unterminated API call");
    }
    return pos_ + 1;
  }

 private:
  std::size_t skip_ws(std::size_t pos) const {
    while (pos < text_.size() && is_space(text_[pos])) ++pos;
    return pos;
  }

  void ws() { pos_ = skip_ws(pos_); }

  bool peek_string(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  [[noreturn]] void fail(std::vector<std::string> expected, std::string message) const {
    throw Failure{pos_, std::move(expected), std::move(message)};
  }

  std::string identifier() {
    std::size_t start = pos_;
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail({"identifier"}, "expected identifier");
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c, std::vector<std::string> expected) {
    ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::move(expected), std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  ApiCall call() {
    ApiCall result;
    result.func = identifier();
    expect('(', {"'('"});
    ws();
    if (pos_ < text_.size() && text_[pos_] == ')') {
      ++pos_;
      return result;
    }
    result.args = arg_list(')');
    return result;
  }

  std::vector<ApiArg> arg_list(char close) {
    std::vector<ApiArg> args;
    for (;;) {
      args.push_back(arg());
      ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == close) {
        ++pos_;
        return args;
      }
      fail({"','", std::string("'") + close + "'"}, "unterminated argument list");
    }
  }

  ApiArg arg() {
    ws();
    if (pos_ >= text_.size()) fail({"argument"}, "unexpected end of input");
    char c = text_[pos_];
    if (c == '"') return ApiArg{quoted()};
    if (c == '{' || c == '(') {
      const char close = c == '{' ? '}' : ')';
      ++pos_;
      ws();
      SetLiteral set;
      set.tuple = c == '(';
      if (pos_ < text_.size() && text_[pos_] == close) {
        ++pos_;
      } else {
        set.items = arg_list(close);
      }
      return ApiArg{std::move(set)};
    }
    if (is_ident_start(c)) {
      std::size_t save = pos_;
      identifier();
      ws();
      bool nested = pos_ < text_.size() && text_[pos_] == '(';
      pos_ = save;
      if (nested) return ApiArg{Nested(call())};
    }
    return bare_token();
  }

  QuotedString quoted() {
    ++pos_;  // opening quote
    std::string value;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\\' && pos_ + 1 < text_.size()) {
        value.push_back(text_[pos_ + 1]);
        pos_ += 2;
        continue;
      }
      if (c == '"') {
        ++pos_;
        return QuotedString{std::move(value)};
      }
      if (c == '\n') break;
      value.push_back(c);
      ++pos_;
    }
    fail({"'\"'"}, "unterminated string");
  }

  ApiArg bare_token() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_bare_stop(text_[pos_])) ++pos_;
    std::string_view token = text_.substr(start, pos_ - start);
    while (!token.empty() && is_space(token.back())) token.remove_suffix(1);
    if (token.empty()) fail({"argument"}, "expected argument");
    if (auto number = match_number(token)) return ApiArg{std::move(*number)};
    if (auto entity = match_entity(token)) return ApiArg{std::move(*entity)};
    return ApiArg{Bare{std::string(token)}};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void append_text(Statement& stmt, std::string_view text, std::size_t start, std::size_t end) {
  if (start >= end) return;
  if (!stmt.segments.empty()) {
    auto& last = stmt.segments.back();
    if (auto* t = std::get_if<TextSegment>(&last.kind); t && last.span.end == start) {
      t->content.append(text.substr(start, end - start));
      last.span.end = end;
      return;
    }
  }
  stmt.segments.push_back(
      Segment{TextSegment{std::string(text.substr(start, end - start))}, Span{start, end}});
}

}  // namespace

ParseResult parse(std::string_view text, ParseMode mode) {
  ParseResult result;
  result.statement.raw_text = std::string(text);
  CallParser parser(text);
  std::size_t text_start = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find('[', pos);
    if (open == std::string_view::npos) break;
    if (!parser.is_call_attempt(open + 1)) {
      pos = open + 1;
      continue;
    }
    ApiCall call;
    try {
      std::size_t end = parser.parse_bracket_body(open + 1, call);
      append_text(result.statement, text, text_start, open);
      result.statement.segments.push_back(Segment{CallSegment{std::move(call)}, Span{open, end}});
      text_start = pos = end;
    } catch (const Failure& f) {
      if (mode == ParseMode::Strict) {
        throw ParseError(f.offset, f.expected,
                         f.message + " at offset " + std::to_string(f.offset));
      }
      result.diagnostics.push_back(Diagnostic{f.offset, f.message, f.expected});
      pos = open + 1;
    }
  }
  append_text(result.statement, text, text_start, text.size());
  return result;
}

Statement parse_statement(std::string_view text) { return parse(text).statement; }

ApiCall parse_call(std::string_view text) {
  auto result = parse(text, ParseMode::Strict);
  const auto& segs = result.statement.segments;
  if (segs.size() != 1 || !segs.front().is_call()) {
    throw ParseError(0, {"'['"}, "expected exactly one bracketed API call");
  }
  return std::get<CallSegment>(segs.front().kind).call;
}

std::vector<ParsedQuery> extract_queries(const Statement& stmt) {
  std::vector<ParsedQuery> out;
  for (const auto& seg : stmt.segments) {
    if (const auto* c = std::get_if<CallSegment>(&seg.kind)) {
      out.push_back(ParsedQuery{c->call, {c->call.insert_output}, seg.span});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string quote(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool looks_like_domain_function(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos || s.find(':', colon + 1) != std::string_view::npos) return false;
  auto ok = [](std::string_view part) {
    return !part.empty() && std::all_of(part.begin(), part.end(), [](char c) {
      auto u = static_cast<unsigned char>(c);
      return std::isalnum(u) || c == '_' || c == '-';
    });
  };
  return ok(s.substr(0, colon)) && ok(s.substr(colon + 1));
}

struct Writer {
  bool canonical = false;

  std::string expr(const ApiCall& call) const {
    std::string out = canonical ? lower(call.func) : call.func;
    out += '(';
    out += list(call.args);
    out += ')';
    return out;
  }

  std::string list(const std::vector<ApiArg>& args) const {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += arg(args[i]);
    }
    return out;
  }

  std::string arg(const ApiArg& a) const {
    return std::visit(
        [this](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Nested>) {
            return expr(v.call());
          } else if constexpr (std::is_same_v<T, QuotedString>) {
            if (canonical && looks_like_domain_function(v.value)) return quote(lower(v.value));
            return quote(v.value);
          } else if constexpr (std::is_same_v<T, EntityRef>) {
            return v.kind + "#" + v.id;
          } else if constexpr (std::is_same_v<T, SetLiteral>) {
            return v.tuple ? "(" + list(v.items) + ")" : "{" + list(v.items) + "}";
          } else if constexpr (std::is_same_v<T, Number>) {
            return v.text;
          } else {
            return v.text;
          }
        },
        a.value);
  }

  std::string bracketed(const ApiCall& call) const {
    std::string out = "[" + expr(call);
    if (call.insert_output) {
      out += "-->";
      if (!canonical && call.result_name) out += *call.result_name;
    }
    out += "]";
    return out;
  }
};

std::string py_quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string tuple_call(const ApiCall& call);

std::string tuple_arg(const ApiArg& a) {
  if (const auto* n = a.as<Nested>()) return tuple_call(n->call());
  if (const auto* q = a.as<QuotedString>()) return py_quote(q->value);
  return py_quote(Writer{}.arg(a));
}

std::string tuple_call(const ApiCall& call) {
  std::string out = "(" + py_quote(call.func) + ", [";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    out += tuple_arg(call.args[i]);
  }
  out += "])";
  return out;
}

}  // namespace

std::string serialize(const ApiCall& call) { return Writer{}.bracketed(call); }

std::string serialize_expression(const ApiCall& call) { return Writer{}.expr(call); }

std::string serialize_arg(const ApiArg& arg) { return Writer{}.arg(arg); }

std::string serialize(const Statement& stmt) {
  std::string out;
  for (const auto& seg : stmt.segments) {
    if (const auto* t = std::get_if<TextSegment>(&seg.kind)) {
      out += t->content;
    } else {
      out += serialize(std::get<CallSegment>(seg.kind).call);
    }
  }
  return out;
}

std::string canonicalize(const ApiCall& call) { return Writer{true}.bracketed(call); }

std::string to_tuple_string(const ParsedQuery& query) {
  std::string out = "(" + tuple_call(query.call) + ", [";
  for (std::size_t i = 0; i < query.insert_flags.size(); ++i) {
    if (i) out += ", ";
    out += query.insert_flags[i] ? "True" : "False";
  }
  out += "])";
  return out;
}

namespace {
std::size_t arg_depth(const ApiArg& a) {
  if (const auto* n = a.as<Nested>()) return depth(n->call());
  if (const auto* s = a.as<SetLiteral>()) {
    std::size_t d = 0;
    for (const auto& item : s->items) d = std::max(d, arg_depth(item));
    return d;
  }
  return 0;
}
}  // namespace

std::size_t depth(const ApiCall& call) {
  std::size_t d = 0;
  for (const auto& a : call.args) d = std::max(d, arg_depth(a));
  return d + 1;
}

}  // namespace gtr::dsl
