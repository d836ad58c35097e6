#include "gtr/prompt_gen.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gtr/kg.hpp"
#include "gtr/recsys.hpp"
#include "gtr/rng.hpp"

namespace gtr::prompt {

using Slots = std::map<std::string, std::string>;

std::vector<PromptTemplate> templates_from_json(const Json& doc) {
  const Json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("templates")) throw Error(ErrorCode::TemplateParseError, "missing \"templates\" array");
    list = &doc.at("templates");
  }
  if (!list->is_array()) throw Error(ErrorCode::TemplateParseError, "\"templates\" must be an array");
  std::vector<PromptTemplate> out;
  for (const auto& j : *list) {
    try {
      PromptTemplate t;
      t.task = j.at("task").get<std::string>();
      t.dataset = j.value("dataset", "");
      t.enumerate = j.value("enumerate", "dataset");
      if (j.contains("slots")) {
        for (const auto& [k, v] : j.at("slots").items()) t.slots[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
      for (const auto& v : j.at("variants")) {
        t.variants.push_back({v.at("input").get<std::string>(), v.at("output").get<std::string>()});
      }
      if (t.variants.empty()) throw Error(ErrorCode::TemplateParseError, "template '" + t.task + "' has no variants");
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::TemplateParseError, std::string("bad template entry: ") + e.what());
    }
  }
  return out;
}

std::vector<PromptTemplate> load_templates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open template file " + path.string());
  try {
    return templates_from_json(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::TemplateParseError, path.string() + ": " + e.what());
  }
}

std::string fill(const std::string& pattern, const Slots& slots) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto start = pattern.find("${", pos);
    if (start == std::string::npos) break;
    auto end = pattern.find('}', start);
    if (end == std::string::npos) {
      throw Error(ErrorCode::TemplateParseError, "unterminated slot at offset " + std::to_string(start));
    }
    out.append(pattern, pos, start - pos);
    auto name = pattern.substr(start + 2, end - start - 2);
    auto it = slots.find(name);
    if (it == slots.end()) throw Error(ErrorCode::SlotUnfillable, "no value for slot '" + name + "'");
    out += it->second;
    pos = end + 1;
  }
  out.append(pattern, pos, std::string::npos);
  return out;
}

namespace {

std::string pretty_name(std::string id) {
  std::replace(id.begin(), id.end(), '_', ' ');
  return id;
}

std::vector<NodeId> sorted_ids(const std::vector<NodeRecord>& nodes) {
  std::vector<NodeId> ids;
  for (const auto& n : nodes) ids.push_back(n.id);
  natural_sort(ids);
  return ids;
}

const GraphDataset& single_graph(const Dataset& d, const PromptTemplate& t) {
  if (const auto* g = std::get_if<GraphDataset>(&d)) return *g;
  throw Error(ErrorCode::SlotUnfillable,
              "enumeration '" + t.enumerate + "' needs a single-graph dataset, '" + t.dataset + "' is an instance set");
}

const GraphInstanceSet& instance_set(const Dataset& d, const PromptTemplate& t) {
  if (const auto* s = std::get_if<GraphInstanceSet>(&d)) return *s;
  throw Error(ErrorCode::SlotUnfillable,
              "enumeration '" + t.enumerate + "' needs a graph-instance dataset, '" + t.dataset + "' is a single graph");
}

// Recommender datasets split into users and items; other graphs treat every node as a user.
std::pair<std::vector<NodeId>, std::vector<NodeId>> users_and_items(const GraphDataset& g) {
  try {
    auto data = recsys::split_interactions(g);
    auto users = data.users;
    auto items = data.items;
    natural_sort(users);
    natural_sort(items);
    return {users, items};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotBipartite) throw;
    return {sorted_ids(g.nodes()), {}};
  }
}

std::vector<std::string> call_sequence(const dsl::Statement& stmt) {
  std::vector<std::string> out;
  for (const auto& q : dsl::extract_queries(stmt)) out.push_back(dsl::canonicalize(q.call));
  return out;
}

dsl::Statement parse_output(const std::string& text, const std::string& task) {
  try {
    return dsl::parse(text, dsl::ParseMode::Strict).statement;
  } catch (const dsl::ParseError& e) {
    throw Error(ErrorCode::TemplateParseError, "template '" + task + "' output does not parse: " + e.what());
  }
}

}  // namespace

std::vector<Slots> enumerate_instances(const PromptTemplate& t, DataHub& data) {
  if (t.dataset.empty()) throw Error(ErrorCode::SlotUnfillable, "template '" + t.task + "' names no dataset");
  auto dataset = data.load(t.dataset);
  const auto& e = t.enumerate;
  std::vector<Slots> out;
  auto add = [&](Slots s) {
    s["dataset"] = t.dataset;
    out.push_back(std::move(s));
  };

  if (e == "dataset") {
    add({});
  } else if (e == "graph" || e == "graph_node" || e == "graph_pair") {
    for (const auto& inst : instance_set(*dataset, t).graphs()) {
      Slots base{{"graph", inst.id}, {"graph_name", pretty_name(inst.id)}};
      if (e == "graph") {
        add(base);
        continue;
      }
      auto ids = sorted_ids(inst.nodes);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (e == "graph_node") {
          auto s = base;
          s["node"] = ids[i];
          add(std::move(s));
          continue;
        }
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          auto s = base;
          s["node"] = ids[i];
          s["node2"] = ids[j];
          add(std::move(s));
        }
      }
    }
  } else if (e == "node" || e == "node_pair") {
    auto ids = sorted_ids(single_graph(*dataset, t).nodes());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (e == "node") {
        add({{"node", ids[i]}});
        continue;
      }
      for (std::size_t j = i + 1; j < ids.size(); ++j) add({{"node", ids[i]}, {"node2", ids[j]}});
    }
  } else if (e == "test_node") {
    for (const auto& id : single_graph(*dataset, t).test_ids()) add({{"node", id}});
  } else if (e == "user" || e == "user_item" || e == "user_pair") {
    auto [users, items] = users_and_items(single_graph(*dataset, t));
    for (std::size_t i = 0; i < users.size(); ++i) {
      if (e == "user") {
        add({{"user", users[i]}});
      } else if (e == "user_item") {
        for (const auto& item : items) add({{"user", users[i]}, {"item", item}});
      } else {
        for (std::size_t j = i + 1; j < users.size(); ++j) add({{"user", users[i]}, {"user2", users[j]}});
      }
    }
  } else if (e == "instance") {
    for (const auto& inst : instance_set(*dataset, t).graphs()) add({{"instance", inst.id}});
  } else if (e == "triple") {
    for (const auto& tr : kg::triples_of(single_graph(*dataset, t))) {
      add({{"head", tr.head}, {"relation", tr.relation}, {"tail", tr.tail}});
    }
  } else {
    throw Error(ErrorCode::TemplateParseError, "unknown enumeration '" + e + "'");
  }
  return out;
}

std::vector<PromptPair> expand_templates(const std::vector<PromptTemplate>& templates, const std::string& dataset,
                                         Executor& executor, const ExpandOptions& options) {
  std::vector<PromptPair> out;
  WorkingMemory memory(4096);
  for (std::size_t ti = 0; ti < templates.size(); ++ti) {
    const auto& t = templates[ti];
    if (!dataset.empty() && t.dataset != dataset) continue;
    auto instances = enumerate_instances(t, executor.data());

    std::vector<std::size_t> chosen(instances.size());
    std::iota(chosen.begin(), chosen.end(), 0);
    if (options.limit > 0 && options.limit < chosen.size()) {
      Rng rng(options.seed + ti);
      rng.shuffle(chosen);
      chosen.resize(options.limit);
      std::sort(chosen.begin(), chosen.end());
    }

    for (auto idx : chosen) {
      auto slots = instances[idx];
      for (const auto& [k, v] : t.slots) slots.emplace(k, v);

      const auto base_output = fill(t.variants.front().output, slots);
      const auto base = parse_output(base_output, t.task);
      auto result = executor.post_process(base, &memory);
      if (!result.ok()) continue;  // no ground truth for this instance
      std::optional<std::string> truth;
      if (!result.results.empty()) truth = joined_results(result.results);
      const auto calls = call_sequence(base);

      for (const auto& v : t.variants) {
        auto output = fill(v.output, slots);
        if (call_sequence(parse_output(output, t.task)) != calls) {
          throw Error(ErrorCode::TemplateParseError,
                      "a variant of template '" + t.task + "' changes the API calls of the base form");
        }
        out.push_back({fill(v.input, slots), std::move(output), truth});
      }
    }
  }
  return out;
}

Validation validate_pairs(const std::vector<PromptPair>& pairs, Executor& executor) {
  Validation out;
  WorkingMemory memory(4096);
  for (const auto& pair : pairs) {
    dsl::Statement stmt;
    try {
      stmt = dsl::parse(pair.output, dsl::ParseMode::Strict).statement;
    } catch (const dsl::ParseError& e) {
      out.dropped.push_back({pair, "not runnable", e.what()});
      continue;
    }
    auto result = executor.post_process(stmt, &memory);
    if (!result.ok()) {
      const auto& d = result.diagnostics.front();
      out.dropped.push_back({pair, "not runnable", d.error_code + ": " + d.message});
      continue;
    }
    if (pair.reasoning_result) {
      auto got = joined_results(result.results);
      if (got != *pair.reasoning_result) {
        out.dropped.push_back({pair, "result mismatch", "expected '" + *pair.reasoning_result + "', got '" + got + "'"});
        continue;
      }
    }
    out.kept.push_back(pair);
  }
  return out;
}

Split split(const std::vector<PromptPair>& pairs, std::uint64_t seed, std::size_t n_test, std::size_t max_train) {
  const auto n = pairs.size();
  if (n <= n_test) {
    throw Error(ErrorCode::TooFewPairs,
                "need more than " + std::to_string(n_test) + " pairs to split, got " + std::to_string(n));
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<std::size_t> test(idx.begin(), idx.begin() + n_test);
  std::vector<std::size_t> train(idx.begin() + n_test, idx.begin() + n_test + std::min(n - n_test, max_train));
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());

  Split out;
  for (auto i : train) out.train.push_back(pairs[i]);
  for (auto i : test) out.test.push_back(pairs[i]);
  return out;
}

Json pair_to_json(const PromptPair& pair) {
  Json j;
  j["input"] = pair.input;
  j["output"] = pair.output;
  j["reasoning_result"] = pair.reasoning_result ? Json(*pair.reasoning_result) : Json(nullptr);
  return j;
}

PromptPair pair_from_json(const Json& j) {
  try {
    PromptPair p{j.at("input").get<std::string>(), j.at("output").get<std::string>(), std::nullopt};
    if (j.contains("reasoning_result") && !j.at("reasoning_result").is_null()) {
      p.reasoning_result = j.at("reasoning_result").get<std::string>();
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("bad prompt record: ") + e.what());
  }
}

std::string to_jsonl(const std::vector<PromptPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) out += pair_to_json(p).dump() + "\n";
  return out;
}

std::vector<PromptPair> from_jsonl(const std::string& text) {
  std::vector<PromptPair> out;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(pair_from_json(Json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::SchemaError, "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

void write_jsonl(const std::vector<PromptPair>& pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::NotFound, "cannot write " + path.string());
  out << to_jsonl(pairs);
}

std::vector<PromptPair> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_jsonl(buf.str());
}

}  // namespace gtr::prompt
