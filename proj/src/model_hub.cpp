#include "gtr/model_hub.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "gtr/baselines.hpp"
#include "gtr/community.hpp"
#include "gtr/toolx.hpp"

namespace gtr::hub {

std::string_view type_name(ParamType t) {
  switch (t) {
    case ParamType::Node: return "node";
    case ParamType::User: return "user";
    case ParamType::Item: return "item";
    case ParamType::Entity: return "entity";
    case ParamType::Relation: return "relation";
    case ParamType::Instance: return "instance";
    case ParamType::Count: return "count";
    case ParamType::Bool: return "bool";
    case ParamType::Text: return "text";
  }
  return "text";
}

// ---------------------------------------------------------------------------
// CallContext

const dsl::ApiArg& CallContext::arg(const std::string& name) const {
  auto it = args_.find(name);
  if (it == args_.end()) throw Error(ErrorCode::ArityError, "missing argument '" + name + "'");
  return it->second;
}

std::string CallContext::id(const std::string& name) const { return resolve_node_ref(arg(name)); }

namespace {

std::optional<long long> integer_of(const dsl::ApiArg& a) {
  auto text = text_of(a);
  if (!text) return std::nullopt;
  static const std::regex integer(R"(\s*[+-]?\d+\s*)");
  if (!std::regex_match(*text, integer)) return std::nullopt;
  return std::stoll(*text);
}

std::optional<bool> bool_of(const dsl::ApiArg& a) {
  auto text = text_of(a);
  if (!text) return std::nullopt;
  std::string t;
  for (char c : *text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (t == "true") return true;
  if (t == "false") return false;
  return std::nullopt;
}

}  // namespace

long long CallContext::count(const std::string& name) const {
  auto v = integer_of(arg(name));
  if (!v) throw Error(ErrorCode::ArityError, "argument '" + name + "' must be an integer");
  return *v;
}

std::optional<long long> CallContext::count_or_none(const std::string& name) const {
  if (!has(name)) return std::nullopt;
  return count(name);
}

std::optional<bool> CallContext::flag(const std::string& name) const {
  if (!has(name)) return std::nullopt;
  auto v = bool_of(arg(name));
  if (!v) throw Error(ErrorCode::ArityError, "argument '" + name + "' must be True or False");
  return v;
}

std::shared_ptr<const GraphDataset> CallContext::graph() const {
  return models_.cached<GraphDataset>("graph|" + graph_.key(),
                                      [this] { return materialize(graph_, data_); });
}

std::shared_ptr<const Dataset> CallContext::dataset() const { return data_.load(graph_.dataset_name); }

// ---------------------------------------------------------------------------
// Registry

std::size_t Descriptor::min_arity() const {
  return static_cast<std::size_t>(
      std::count_if(params.begin(), params.end(), [](const ParamSpec& p) { return p.required; }));
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::pair<std::string, std::string> split_domain_function(std::string_view text) {
  std::string norm;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    norm += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  auto colon = norm.find(':');
  if (colon == std::string::npos || norm.find(':', colon + 1) != std::string::npos || colon == 0 ||
      colon + 1 == norm.size()) {
    throw Error(ErrorCode::Malformed, "expected \"domain:function\", got \"" + std::string(text) + "\"");
  }
  return {norm.substr(0, colon), norm.substr(colon + 1)};
}

void ModelRegistry::add(Descriptor d) {
  std::unique_lock lock(mutex_);
  auto key = d.key();
  if (entries_.count(key)) throw Error(ErrorCode::DuplicateKey, "'" + key + "' is already registered");
  entries_.emplace(key, std::make_shared<const Descriptor>(std::move(d)));
}

const Descriptor* ModelRegistry::find(std::string_view domain, std::string_view function) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(std::string(domain) + ":" + std::string(function));
  return it == entries_.end() ? nullptr : it->second.get();
}

std::vector<std::string> ModelRegistry::suggestions(std::string_view domain_function, std::size_t limit) const {
  std::string query;
  try {
    auto [d, f] = split_domain_function(domain_function);
    query = d + ":" + f;
  } catch (const Error&) {
    query = std::string(domain_function);
  }
  std::vector<std::pair<std::size_t, std::string>> scored;
  {
    std::shared_lock lock(mutex_);
    for (const auto& [key, d] : entries_) {
      auto dist = edit_distance(query, key);
      bool same_function = query.size() > d->function.size() &&
                           query.compare(query.size() - d->function.size(), d->function.size(), d->function) == 0;
      if (dist <= 3 || same_function) scored.emplace_back(same_function ? std::min<std::size_t>(dist, 1) : dist, key);
    }
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (const auto& [dist, key] : scored) {
    if (out.size() == limit) break;
    out.push_back(key);
  }
  return out;
}

const Descriptor& ModelRegistry::resolve(std::string_view domain_function) const {
  auto [domain, function] = split_domain_function(domain_function);
  if (const auto* d = find(domain, function)) return *d;
  std::string message = "unknown function \"" + std::string(domain_function) + "\"";
  auto near = suggestions(domain_function);
  if (!near.empty()) {
    message += "; did you mean ";
    for (std::size_t i = 0; i < near.size(); ++i) message += (i ? ", \"" : "\"") + near[i] + "\"";
    message += "?";
  }
  throw Error(ErrorCode::UnknownFunction, message);
}

std::vector<std::string> ModelRegistry::keys() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [key, _] : entries_) out.push_back(key);
  return out;
}

Json ModelRegistry::catalog() const {
  std::shared_lock lock(mutex_);
  Json list = Json::array();
  for (const auto& [key, d] : entries_) {
    Json params = Json::array();
    for (const auto& p : d->params) {
      params.push_back({{"name", p.name}, {"type", std::string(type_name(p.type))}, {"required", p.required}});
    }
    list.push_back({{"name", key},
                    {"domain", d->domain},
                    {"function", d->function},
                    {"arity", {{"min", d->min_arity()}, {"max", d->max_arity()}}},
                    {"params", params},
                    {"result_kind", d->result_kind},
                    {"baseline_substitute", d->baseline_substitute},
                    {"summary", d->summary}});
  }
  return Json{{"functions", list}};
}

std::map<std::string, dsl::ApiArg> bind_arguments(const Descriptor& d, const std::vector<dsl::ApiArg>& args) {
  static const std::regex keyword(R"(\s*([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.*?)\s*)");
  std::map<std::string, dsl::ApiArg> bound;
  std::size_t next = 0;
  for (const auto& a : args) {
    std::smatch m;
    const auto* bare = a.as<dsl::Bare>();
    if (bare && std::regex_match(bare->text, m, keyword)) {
      auto name = m[1].str();
      std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
      auto spec = std::find_if(d.params.begin(), d.params.end(), [&](const ParamSpec& p) { return p.name == name; });
      if (spec == d.params.end()) {
        throw Error(ErrorCode::ArityError, d.key() + " has no parameter named '" + name + "'");
      }
      if (bound.count(name)) throw Error(ErrorCode::ArityError, "parameter '" + name + "' given twice");
      bound.emplace(name, dsl::ApiArg{dsl::Bare{m[2].str()}});
      continue;
    }
    while (next < d.params.size() && bound.count(d.params[next].name)) ++next;
    if (next >= d.params.size()) {
      throw Error(ErrorCode::ArityError, d.key() + " takes at most " + std::to_string(d.max_arity()) +
                                             " argument(s) after the graph, got " + std::to_string(args.size()));
    }
    bound.emplace(d.params[next++].name, a);
  }
  for (const auto& p : d.params) {
    auto it = bound.find(p.name);
    if (it == bound.end()) {
      if (p.required) {
        throw Error(ErrorCode::ArityError, d.key() + " requires argument '" + p.name + "' (" +
                                               std::string(type_name(p.type)) + ")");
      }
      continue;
    }
    const auto& a = it->second;
    if (a.as<dsl::Nested>()) {
      throw Error(ErrorCode::ArityError, "argument '" + p.name + "' of " + d.key() + " cannot be a call");
    }
    if (p.type == ParamType::Count && !integer_of(a)) {
      throw Error(ErrorCode::ArityError, "argument '" + p.name + "' of " + d.key() + " must be an integer");
    }
    if (p.type == ParamType::Bool && !bool_of(a)) {
      throw Error(ErrorCode::ArityError, "argument '" + p.name + "' of " + d.key() + " must be True or False");
    }
  }
  return bound;
}

// ---------------------------------------------------------------------------
// ModelHub

ModelHub::ModelHub(HubSettings settings, bool with_defaults) : settings_(std::move(settings)) {
  if (!with_defaults) return;
  register_toolx(registry_);
  register_kmeans(registry_);
  register_bpr(registry_);
  register_transe(registry_);
  register_baselines(registry_);
}

void ModelHub::put_bpr(const std::string& dataset, recsys::BprModel model) {
  std::lock_guard lock(cache_mutex_);
  cache_["bpr|" + GraphHandle{dataset, WholeGraph{}}.key()] = std::make_shared<const recsys::BprModel>(std::move(model));
}

void ModelHub::put_transe(const std::string& dataset, kg::KgModel model) {
  std::lock_guard lock(cache_mutex_);
  cache_["transe|" + GraphHandle{dataset, WholeGraph{}}.key()] = std::make_shared<const kg::KgModel>(std::move(model));
}

std::shared_ptr<const recsys::BprModel> ModelHub::bpr_for(const CallContext& ctx) {
  return cached<recsys::BprModel>("bpr|" + ctx.handle().key(),
                                  [&] { return recsys::train_bpr(*ctx.graph(), settings_.bpr); });
}

std::shared_ptr<const kg::KgModel> ModelHub::transe_for(const CallContext& ctx) {
  return cached<kg::KgModel>("transe|" + ctx.handle().key(),
                             [&] { return kg::train_transe(*ctx.graph(), settings_.transe); });
}

// ---------------------------------------------------------------------------
// Default registrations

namespace {

ParamSpec req(std::string name, ParamType t) { return {std::move(name), t, true}; }
ParamSpec opt(std::string name, ParamType t) { return {std::move(name), t, false}; }

NodeSetValue node_set(toolx::NodeSet ids) { return NodeSetValue{std::move(ids)}; }

}  // namespace

void register_toolx(ModelRegistry& r) {
  auto add = [&r](std::string fn, std::vector<ParamSpec> params, std::string kind, std::string summary, Invoke f) {
    r.add({"toolx", std::move(fn), std::move(params), std::move(kind), std::move(summary), false, std::move(f)});
  };
  add("order", {}, "count", "number of nodes",
      [](const CallContext& c) -> ReasoningValue { return Count{toolx::order(*c.graph())}; });
  add("size", {}, "count", "number of links",
      [](const CallContext& c) -> ReasoningValue { return Count{toolx::size(*c.graph())}; });
  add("density", {opt("is_directed", ParamType::Bool)}, "ratio", "existing links over possible links",
      [](const CallContext& c) -> ReasoningValue { return toolx::density(*c.graph(), c.flag("is_directed")); });
  add("eccentricity", {opt("node", ParamType::Node)}, "node_map",
      "maximum distance from each node (or one node) to any other",
      [](const CallContext& c) -> ReasoningValue {
        if (c.has("node")) return Count{toolx::eccentricity(*c.graph(), c.id("node"))};
        return NodeMapValue{toolx::eccentricity(*c.graph())};
      });
  add("radius", {}, "count", "minimum eccentricity",
      [](const CallContext& c) -> ReasoningValue { return Count{toolx::radius(*c.graph())}; });
  add("diameter", {}, "count", "maximum eccentricity",
      [](const CallContext& c) -> ReasoningValue { return Count{toolx::diameter(*c.graph())}; });
  add("center", {}, "node_set", "nodes whose eccentricity equals the radius",
      [](const CallContext& c) -> ReasoningValue { return node_set(toolx::center(*c.graph())); });
  add("periphery", {}, "node_set", "nodes whose eccentricity equals the diameter",
      [](const CallContext& c) -> ReasoningValue { return node_set(toolx::periphery(*c.graph())); });
  add("shortest_path", {req("source", ParamType::Node), req("target", ParamType::Node)}, "count",
      "hop count of a shortest path", [](const CallContext& c) -> ReasoningValue {
        return Count{toolx::shortest_path(*c.graph(), c.id("source"), c.id("target"))};
      });
  Invoke avg = [](const CallContext& c) -> ReasoningValue {
    return Decimal{toolx::avg_path_length(*c.graph()), 2};
  };
  add("avg_path_length", {}, "decimal", "mean shortest-path length over all node pairs", avg);
  add("avg_shortest_path", {}, "decimal", "alias of avg_path_length", avg);
  add("max_path_length", {}, "count", "largest shortest-path length",
      [](const CallContext& c) -> ReasoningValue { return Count{toolx::max_path_length(*c.graph())}; });
  add("min_path_length", {}, "count", "smallest shortest-path length between distinct nodes",
      [](const CallContext& c) -> ReasoningValue { return Count{toolx::min_path_length(*c.graph())}; });
}

namespace {

std::shared_ptr<const community::CommunityAssignment> assignment(const CallContext& c) {
  auto k = c.count_or_none("k");
  if (!k) {
    // a dataset may pin its community count in the profile
    auto g = c.graph();
    if (auto it = g->profile.extras.find("kmeans_k"); it != g->profile.extras.end()) k = it->get<long long>();
  }
  auto seed = c.models().settings().seed;
  auto key = "kmeans|" + c.handle().key() + "|" + (k ? std::to_string(*k) : "auto") + "|" + std::to_string(seed);
  return c.models().cached<community::CommunityAssignment>(key, [&] {
    std::optional<int> clusters;
    if (k) clusters = static_cast<int>(*k);
    return community::fit_communities(*c.graph(), clusters, seed);
  });
}

}  // namespace

void register_kmeans(ModelRegistry& r) {
  auto add = [&r](std::string fn, std::vector<ParamSpec> params, std::string kind, std::string summary, Invoke f) {
    params.push_back(opt("k", ParamType::Count));
    r.add({"kmeans", std::move(fn), std::move(params), std::move(kind), std::move(summary), false, std::move(f)});
  };
  add("community", {req("user", ParamType::User), opt("aspect", ParamType::Text)}, "label",
      "community id of a user, rendered #<id>", [](const CallContext& c) -> ReasoningValue {
        return Label{"#" + std::to_string(community::community(*assignment(c), c.id("user")))};
      });
  add("community_count", {}, "count", "number of communities", [](const CallContext& c) -> ReasoningValue {
    return Count{community::community_count(*assignment(c))};
  });
  add("community_size", {req("user", ParamType::User)}, "count", "size of the user's community",
      [](const CallContext& c) -> ReasoningValue {
        return Count{community::community_size(*assignment(c), c.id("user"))};
      });
  add("community_avg_size", {}, "decimal", "mean community size", [](const CallContext& c) -> ReasoningValue {
    return Decimal{community::community_avg_size(*assignment(c)), 2};
  });
  add("community_max_size", {}, "count", "largest community size", [](const CallContext& c) -> ReasoningValue {
    return Count{community::community_max_size(*assignment(c))};
  });
  add("common_community_check", {req("user1", ParamType::User), req("user2", ParamType::User)}, "boolean",
      "whether two users share a community", [](const CallContext& c) -> ReasoningValue {
        return Boolean{community::common_community_check(*assignment(c), c.id("user1"), c.id("user2"))};
      });
}

void register_bpr(ModelRegistry& r) {
  r.add({"bpr", "recommendation", {req("user", ParamType::User), req("item", ParamType::Item)}, "decimal",
         "likelihood that the user interacts with the item", false, [](const CallContext& c) -> ReasoningValue {
           auto m = c.models().bpr_for(c);
           return Decimal{recsys::recommendation(*m, c.id("user"), c.id("item")), 3};
         }});
  r.add({"bpr", "topk_recommendation", {req("user", ParamType::User), req("k", ParamType::Count)}, "ranked_list",
         "top-k unseen items for the user", false, [](const CallContext& c) -> ReasoningValue {
           auto m = c.models().bpr_for(c);
           RankedList out;
           for (const auto& [item, score] : recsys::topk_recommendation(*m, c.id("user"), c.count("k"))) {
             out.items.push_back(item);
           }
           return out;
         }});
}

void register_transe(ModelRegistry& r) {
  Invoke relation = [](const CallContext& c) -> ReasoningValue {
    return Label{kg::search_relation(*c.models().transe_for(c), c.id("head"), c.id("tail"))};
  };
  Invoke head = [](const CallContext& c) -> ReasoningValue {
    return Label{kg::search_head_entity(*c.models().transe_for(c), c.id("relation"), c.id("tail"))};
  };
  Invoke tail = [](const CallContext& c) -> ReasoningValue {
    return Label{kg::search_tail_entity(*c.models().transe_for(c), c.id("head"), c.id("relation"))};
  };
  std::vector<ParamSpec> ht{req("head", ParamType::Entity), req("tail", ParamType::Entity)};
  std::vector<ParamSpec> rt{req("relation", ParamType::Relation), req("tail", ParamType::Entity)};
  std::vector<ParamSpec> hr{req("head", ParamType::Entity), req("relation", ParamType::Relation)};
  r.add({"transe", "relation", ht, "label", "relation linking head to tail", false, relation});
  r.add({"transe", "head_entity", rt, "label", "head entity for a relation and tail", false, head});
  r.add({"transe", "tail_entity", hr, "label", "tail entity for a head and relation", false, tail});
  r.add({"transe", "search_relation", ht, "label", "alias of relation", false, relation});
  r.add({"transe", "search_head_entity", rt, "label", "alias of head_entity", false, head});
  r.add({"transe", "search_tail_entity", hr, "label", "alias of tail_entity", false, tail});
}

void register_baselines(ModelRegistry& r) {
  r.add({"graph_bert", "topic", {req("node", ParamType::Node)}, "label",
         "node topic by label propagation over the training labels", true,
         [](const CallContext& c) -> ReasoningValue {
           auto g = c.graph();
           auto node = c.id("node");
           if (!g->has_node(node)) throw Error(ErrorCode::UnknownNode, "unknown node '" + node + "'");
           auto lp = c.models().cached<baselines::LabelPropagation>(
               "lp|" + c.handle().key(), [&] { return baselines::LabelPropagation::fit(*g); });
           return Label{lp->predict(node)};
         }});
  r.add({"seg_bert", "molecule_function", {opt("instance", ParamType::Instance)}, "label",
         "graph instance label by WL histogram cosine 1-NN", true, [](const CallContext& c) -> ReasoningValue {
           auto data = c.dataset();
           const auto* set = std::get_if<GraphInstanceSet>(data.get());
           if (!set) {
             throw Error(ErrorCode::ArityError, "'" + c.handle().dataset_name + "' is not a graph instance set");
           }
           std::string id;
           if (c.has("instance")) {
             id = c.id("instance");
           } else if (const auto* sel = std::get_if<InstanceSelection>(&c.handle().selection)) {
             id = sel->graph_id;
           } else {
             throw Error(ErrorCode::ArityError, "seg_bert:molecule_function requires an instance");
           }
           auto clf = c.models().cached<baselines::WlClassifier>(
               "wl|" + c.handle().dataset_name, [&] { return baselines::WlClassifier::fit(*set); });
           return Label{clf->predict(id)};
         }});
}

Json make_checkpoint(const std::string& dataset, const recsys::BprModel& model) {
  Json j;
  j["kind"] = "bpr";
  j["dataset"] = dataset;
  j["model"] = model.to_json();
  return j;
}

Json make_checkpoint(const std::string& dataset, const kg::KgModel& model) {
  Json j;
  j["kind"] = "transe";
  j["dataset"] = dataset;
  j["model"] = model.to_json();
  return j;
}

std::string install_checkpoint(ModelHub& hub, const Json& doc) {
  try {
    const auto kind = doc.at("kind").get<std::string>();
    const auto dataset = doc.at("dataset").get<std::string>();
    if (kind == "bpr") {
      hub.put_bpr(dataset, recsys::BprModel::from_json(doc.at("model")));
    } else if (kind == "transe") {
      hub.put_transe(dataset, kg::KgModel::from_json(doc.at("model")));
    } else {
      throw Error(ErrorCode::SchemaError, "unknown checkpoint kind '" + kind + "'");
    }
    return kind + ":" + dataset;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("bad checkpoint: ") + e.what());
  }
}

}  // namespace gtr::hub
