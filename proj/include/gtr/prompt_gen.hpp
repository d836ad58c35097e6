#pragma once

// Prompt dataset generation: template expansion with executed ground truth,
// execute-and-filter validation, the fixed train/test split, and JSONL I/O.
//
// Template file (JSON):
//
//   { "templates": [
//       { "task": "property", "dataset": "gpr", "enumerate": "graph",
//         "slots": { "k": "1" },
//         "variants": [ { "input": "...${graph_name}...", "output": "...[GR(...)-->r]..." }, ... ] } ] }
//
// Patterns use ${slot}. The enumeration fixes which slots are bound per
// instance; "slots" adds constants. The first variant is the base form.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtr/executor.hpp"
#include "gtr/graph_store.hpp"

namespace gtr::prompt {

struct Variant {
  std::string input;
  std::string output;
};

/// How instances are drawn from the dataset:
///   dataset     ${dataset}
///   graph       ${graph} ${graph_name}             one per graph instance
///   graph_node  ${graph} ${graph_name} ${node}     every node of every instance
///   graph_pair  ${graph} ${graph_name} ${node} ${node2}
///   node        ${node}                             nodes of a single graph
///   test_node   ${node}                             nodes listed in test_idx
///   node_pair   ${node} ${node2}
///   user        ${user}                             link sources (recommender) or nodes
///   user_item   ${user} ${item}
///   user_pair   ${user} ${user2}
///   instance    ${instance}                         graph instances of a set
///   triple      ${head} ${relation} ${tail}
/// ${dataset} is bound for every enumeration.
struct PromptTemplate {
  std::string task;
  std::string dataset;
  std::string enumerate = "dataset";
  std::map<std::string, std::string> slots;
  std::vector<Variant> variants;
};

struct PromptPair {
  std::string input;
  std::string output;
  std::optional<std::string> reasoning_result;

  bool operator==(const PromptPair&) const = default;
};

std::vector<PromptTemplate> templates_from_json(const Json& doc);
std::vector<PromptTemplate> load_templates(const std::filesystem::path& path);

/// Replaces every ${name}; throws SlotUnfillable naming the first missing
/// slot, TemplateParseError on an unterminated "${".
std::string fill(const std::string& pattern, const std::map<std::string, std::string>& slots);

/// Slot bindings for every instance of the template's enumeration, in a
/// deterministic order.
std::vector<std::map<std::string, std::string>> enumerate_instances(const PromptTemplate& t, DataHub& data);

struct ExpandOptions {
  std::size_t limit = 0;  // instances per template; 0 = all
  std::uint64_t seed = 42;
};

/// For each template, picks up to `limit` instances (seeded sample, kept in
/// enumeration order), executes the base output to obtain the ground truth
/// and emits one pair per variant. Instances whose calls fail are skipped.
/// A template whose dataset differs from `dataset` is ignored unless
/// `dataset` is empty.
std::vector<PromptPair> expand_templates(const std::vector<PromptTemplate>& templates, const std::string& dataset,
                                         Executor& executor, const ExpandOptions& options = {});

struct DroppedPair {
  PromptPair pair;
  std::string reason;  // "not runnable" or "result mismatch"
  std::string detail;
};

struct Validation {
  std::vector<PromptPair> kept;
  std::vector<DroppedPair> dropped;
};

/// Re-executes each output. Drops pairs that do not parse or whose calls
/// fail ("not runnable") and pairs whose rendered result differs from the
/// recorded reasoning_result ("result mismatch").
Validation validate_pairs(const std::vector<PromptPair>& pairs, Executor& executor);

struct Split {
  std::vector<PromptPair> train;
  std::vector<PromptPair> test;
};

/// `n_test` uniformly sampled test pairs, then min(N - n_test, max_train)
/// training pairs from the remainder. Requires N > n_test.
Split split(const std::vector<PromptPair>& pairs, std::uint64_t seed, std::size_t n_test = 160,
            std::size_t max_train = 1600);

Json pair_to_json(const PromptPair& pair);
PromptPair pair_from_json(const Json& j);

std::string to_jsonl(const std::vector<PromptPair>& pairs);
std::vector<PromptPair> from_jsonl(const std::string& text);
void write_jsonl(const std::vector<PromptPair>& pairs, const std::filesystem::path& path);
std::vector<PromptPair> read_jsonl(const std::filesystem::path& path);

}  // namespace gtr::prompt
