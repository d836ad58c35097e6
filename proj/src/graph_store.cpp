#include "gtr/graph_store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

namespace gtr {

namespace {

bool is_integer_text(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c));
         });
}

std::string_view strip_zeros(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return digits;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

[[noreturn]] void schema_error(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::SchemaError, field + ": " + reason);
}

}  // namespace

bool natural_less(std::string_view a, std::string_view b) {
  bool ia = is_integer_text(a);
  bool ib = is_integer_text(b);
  if (ia != ib) return ia;
  if (ia) {
    bool na = a.front() == '-';
    bool nb = b.front() == '-';
    if (na != nb) return na;
    auto da = strip_zeros(na ? a.substr(1) : a);
    auto db = strip_zeros(nb ? b.substr(1) : b);
    if (da != db) {
      bool less = da.size() != db.size() ? da.size() < db.size() : da < db;
      return na ? !less : less;
    }
  }
  return a < b;
}

void natural_sort(std::vector<NodeId>& ids) {
  std::sort(ids.begin(), ids.end(),
            [](const NodeId& a, const NodeId& b) { return natural_less(a, b); });
}

// ---------------------------------------------------------------------------

GraphDataset::GraphDataset(DataProfile p, std::vector<NodeRecord> nodes, std::vector<LinkRecord> links)
    : profile(std::move(p)), nodes_(std::move(nodes)), links_(std::move(links)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
}

const NodeRecord* GraphDataset::find_node(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

namespace {
std::vector<std::string> id_list(const Json& extras, const char* key) {
  std::vector<std::string> out;
  if (!extras.contains(key)) return out;
  for (const auto& v : extras.at(key)) out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  return out;
}
}  // namespace

std::vector<NodeId> GraphDataset::test_ids() const { return id_list(profile.extras, "test_idx"); }

GraphInstanceSet::GraphInstanceSet(DataProfile p, std::vector<GraphInstance> graphs)
    : profile(std::move(p)), graphs_(std::move(graphs)) {
  for (std::size_t i = 0; i < graphs_.size(); ++i) index_.emplace(graphs_[i].id, i);
}

const GraphInstance* GraphInstanceSet::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &graphs_[it->second];
}

std::vector<std::string> GraphInstanceSet::test_ids() const {
  return id_list(profile.extras, "test_idx");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void check_links(const std::string& where, const std::vector<NodeRecord>& nodes,
                 const std::vector<LinkRecord>& links, bool directed, bool weighted,
                 std::vector<std::string>& out) {
  std::set<std::string> ids;
  for (const auto& n : nodes) {
    if (!ids.insert(n.id).second) out.push_back(where + "duplicate node id '" + n.id + "'");
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    std::string tag = where + "link " + std::to_string(i) + " (" + l.source + ", " + l.target + ")";
    if (!ids.count(l.source)) out.push_back(tag + ": unknown source node");
    if (!ids.count(l.target)) out.push_back(tag + ": unknown target node");
    auto key = std::make_pair(l.source, l.target);
    if (!directed && natural_less(key.second, key.first)) std::swap(key.first, key.second);
    if (!seen.insert(key).second) out.push_back(tag + ": duplicate link");
    if (weighted && !l.weight) out.push_back(tag + ": missing weight in weighted graph");
    if (!weighted && l.weight) out.push_back(tag + ": weight present in unweighted graph");
    if (l.timestamp && *l.timestamp < 0) out.push_back(tag + ": negative timestamp");
  }
}

}  // namespace

std::vector<std::string> validate(const GraphDataset& g) {
  std::vector<std::string> out;
  const auto& p = g.profile;
  if (p.name.empty()) out.push_back("data_profile.name is empty");
  if (g.nodes().size() != p.order) {
    out.push_back("order " + std::to_string(p.order) + " != node count " + std::to_string(g.nodes().size()));
  }
  if (g.links().size() != p.size) {
    out.push_back("size " + std::to_string(p.size) + " != link count " + std::to_string(g.links().size()));
  }
  check_links("", g.nodes(), g.links(), p.is_directed, p.is_weighted, out);
  std::optional<std::size_t> dim;
  if (p.extras.contains("feature_dim") && p.extras["feature_dim"].is_number_unsigned()) {
    dim = p.extras["feature_dim"].get<std::size_t>();
  }
  for (const auto& n : g.nodes()) {
    if (!n.features) continue;
    if (!dim) dim = n.features->size();
    if (n.features->size() != *dim) {
      out.push_back("node '" + n.id + "' feature dimension " + std::to_string(n.features->size()) +
                    " != " + std::to_string(*dim));
    }
  }
  return out;
}

std::vector<std::string> validate(const GraphInstanceSet& s) {
  std::vector<std::string> out;
  const auto& p = s.profile;
  if (p.name.empty()) out.push_back("data_profile.name is empty");
  if (!p.extras.contains("graph_number") || !p.extras["graph_number"].is_number_integer()) {
    out.push_back("data_profile.graph_number missing");
  } else {
    auto n = p.extras["graph_number"].get<long long>();
    if (n < 1) out.push_back("graph_number must be >= 1");
    if (n != static_cast<long long>(s.graphs().size())) {
      out.push_back("graph_number " + std::to_string(n) + " != instance count " +
                    std::to_string(s.graphs().size()));
    }
  }
  std::set<std::string> ids;
  for (const auto& g : s.graphs()) {
    if (!ids.insert(g.id).second) out.push_back("duplicate graph id '" + g.id + "'");
    check_links("graph '" + g.id + "' ", g.nodes, g.links, p.is_directed, p.is_weighted, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string id_string(const Json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  schema_error(field, "expected string or integer id");
}

std::optional<std::string> label_string(const Json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return v.dump();
}

bool get_bool(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) schema_error(where + "." + key, "missing");
  if (!obj[key].is_boolean()) schema_error(where + "." + key, "expected boolean");
  return obj[key].get<bool>();
}

std::size_t get_count(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) schema_error(where + "." + key, "missing");
  if (!obj[key].is_number_integer() || obj[key].get<long long>() < 0) {
    schema_error(where + "." + key, "expected non-negative integer");
  }
  return obj[key].get<std::size_t>();
}

DataProfile profile_from(const Json& doc, bool instance_set) {
  if (!doc.contains("data_profile") || !doc["data_profile"].is_object()) {
    schema_error("data_profile", "missing or not an object");
  }
  const auto& j = doc["data_profile"];
  DataProfile p;
  if (!j.contains("name") || !j["name"].is_string()) schema_error("data_profile.name", "expected string");
  p.name = j["name"].get<std::string>();
  p.is_directed = get_bool(j, "is_directed", "data_profile");
  p.is_weighted = get_bool(j, "is_weighted", "data_profile");
  if (!instance_set) {
    p.order = get_count(j, "order", "data_profile");
    p.size = get_count(j, "size", "data_profile");
  } else {
    get_count(j, "graph_number", "data_profile");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& key = it.key();
    if (key == "name" || key == "is_directed" || key == "is_weighted") continue;
    if (!instance_set && (key == "order" || key == "size")) continue;
    p.extras[key] = it.value();
  }
  return p;
}

NodeRecord node_from(const std::string& id, const Json& v) {
  NodeRecord n{id, std::nullopt, std::nullopt};
  if (v.is_null()) return n;
  if (!v.is_object()) schema_error("nodes." + id, "expected object");
  if (v.contains("features") && !v["features"].is_null()) {
    if (!v["features"].is_array()) schema_error("nodes." + id + ".features", "expected array");
    std::vector<double> f;
    for (const auto& x : v["features"]) {
      if (!x.is_number()) schema_error("nodes." + id + ".features", "expected numbers");
      f.push_back(x.get<double>());
    }
    n.features = std::move(f);
  }
  if (v.contains("label")) n.label = label_string(v["label"]);
  return n;
}

LinkRecord link_from(const Json& v, const std::string& where) {
  LinkRecord l;
  if (v.is_array()) {
    if (v.size() != 2) schema_error(where, "pair links need exactly two endpoints");
    l.source = id_string(v[0], where);
    l.target = id_string(v[1], where);
    return l;
  }
  if (!v.is_object()) schema_error(where, "expected link record");
  if (!v.contains("source") || !v.contains("target")) schema_error(where, "missing source/target");
  l.source = id_string(v["source"], where + ".source");
  l.target = id_string(v["target"], where + ".target");
  if (v.contains("weight") && !v["weight"].is_null()) {
    if (!v["weight"].is_number()) schema_error(where + ".weight", "expected number");
    l.weight = v["weight"].get<double>();
  }
  if (v.contains("timestamp") && !v["timestamp"].is_null()) {
    if (!v["timestamp"].is_number_integer()) schema_error(where + ".timestamp", "expected integer");
    l.timestamp = v["timestamp"].get<std::int64_t>();
  }
  if (v.contains("label")) l.label = label_string(v["label"]);
  return l;
}

std::vector<LinkRecord> links_from(const Json& arr, const std::string& where) {
  if (!arr.is_array()) schema_error(where, "expected array");
  std::vector<LinkRecord> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(link_from(arr[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json node_json(const NodeRecord& n) {
  Json j = Json::object();
  if (n.features) j["features"] = *n.features;
  if (n.label) j["label"] = *n.label;
  return j;
}

Json link_json(const LinkRecord& l) {
  Json j = Json::object();
  j["source"] = l.source;
  j["target"] = l.target;
  if (l.weight) j["weight"] = *l.weight;
  if (l.timestamp) j["timestamp"] = *l.timestamp;
  if (l.label) j["label"] = *l.label;
  return j;
}

}  // namespace

Dataset dataset_from_json(const Json& doc) {
  if (!doc.is_object()) schema_error("<root>", "expected object");
  if (doc.contains("schema_version")) {
    if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != 1) {
      schema_error("schema_version", "unsupported (current = 1)");
    }
  }
  if (doc.contains("graph_set")) {
    DataProfile profile = profile_from(doc, true);
    const auto& set = doc["graph_set"];
    if (!set.is_object()) schema_error("graph_set", "expected object");
    std::vector<GraphInstance> graphs;
    for (auto it = set.begin(); it != set.end(); ++it) {
      const std::string where = "graph_set." + it.key();
      const auto& g = it.value();
      if (!g.is_object() || !g.contains("nodes") || !g.contains("links")) {
        schema_error(where, "expected {nodes, links, label}");
      }
      GraphInstance inst;
      inst.id = it.key();
      if (!g["nodes"].is_array()) schema_error(where + ".nodes", "expected array");
      for (const auto& n : g["nodes"]) inst.nodes.push_back(NodeRecord{id_string(n, where + ".nodes"), {}, {}});
      inst.links = links_from(g["links"], where + ".links");
      if (g.contains("label")) inst.label = label_string(g["label"]);
      graphs.push_back(std::move(inst));
    }
    GraphInstanceSet result(std::move(profile), std::move(graphs));
    if (auto v = validate(result); !v.empty()) throw ValidationError(std::move(v));
    return result;
  }
  DataProfile profile = profile_from(doc, false);
  if (!doc.contains("nodes") || !doc["nodes"].is_object()) schema_error("nodes", "missing or not an object");
  if (!doc.contains("links")) schema_error("links", "missing");
  std::vector<NodeRecord> nodes;
  for (auto it = doc["nodes"].begin(); it != doc["nodes"].end(); ++it) {
    nodes.push_back(node_from(it.key(), it.value()));
  }
  GraphDataset result(std::move(profile), std::move(nodes), links_from(doc["links"], "links"));
  if (auto v = validate(result); !v.empty()) throw ValidationError(std::move(v));
  return result;
}

Json dataset_to_json(const Dataset& dataset) {
  Json doc = Json::object();
  doc["schema_version"] = 1;
  if (const auto* g = std::get_if<GraphDataset>(&dataset)) {
    Json p = Json::object();
    p["name"] = g->profile.name;
    p["order"] = g->profile.order;
    p["size"] = g->profile.size;
    p["is_directed"] = g->profile.is_directed;
    p["is_weighted"] = g->profile.is_weighted;
    for (auto it = g->profile.extras.begin(); it != g->profile.extras.end(); ++it) p[it.key()] = it.value();
    doc["data_profile"] = std::move(p);
    Json nodes = Json::object();
    for (const auto& n : g->nodes()) nodes[n.id] = node_json(n);
    doc["nodes"] = std::move(nodes);
    Json links = Json::array();
    for (const auto& l : g->links()) links.push_back(link_json(l));
    doc["links"] = std::move(links);
    return doc;
  }
  const auto& s = std::get<GraphInstanceSet>(dataset);
  Json p = Json::object();
  p["name"] = s.profile.name;
  p["is_directed"] = s.profile.is_directed;
  p["is_weighted"] = s.profile.is_weighted;
  for (auto it = s.profile.extras.begin(); it != s.profile.extras.end(); ++it) p[it.key()] = it.value();
  doc["data_profile"] = std::move(p);
  Json set = Json::object();
  for (const auto& g : s.graphs()) {
    Json entry = Json::object();
    Json nodes = Json::array();
    for (const auto& n : g.nodes) nodes.push_back(n.id);
    entry["nodes"] = std::move(nodes);
    Json links = Json::array();
    for (const auto& l : g.links) {
      if (!l.weight && !l.timestamp && !l.label) {
        links.push_back(Json::array({l.source, l.target}));
      } else {
        links.push_back(link_json(l));
      }
    }
    entry["links"] = std::move(links);
    if (g.label) entry["label"] = *g.label;
    set[g.id] = std::move(entry);
  }
  doc["graph_set"] = std::move(set);
  return doc;
}

Dataset load_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "dataset file not found: " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(path.string(), std::string("malformed JSON: ") + e.what());
  }
  return dataset_from_json(doc);
}

void save_dataset_file(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::NotFound, "cannot write " + path.string());
  out << dataset_to_json(dataset).dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// Registry and hub

DatasetRegistry::DatasetRegistry(const DatasetRegistry& other) {
  std::shared_lock lock(other.mutex_);
  entries_ = other.entries_;
}

DatasetRegistry& DatasetRegistry::operator=(const DatasetRegistry& other) {
  if (this == &other) return *this;
  std::map<std::string, std::filesystem::path> copy;
  {
    std::shared_lock lock(other.mutex_);
    copy = other.entries_;
  }
  std::unique_lock lock(mutex_);
  entries_ = std::move(copy);
  return *this;
}

void DatasetRegistry::add(const std::string& name, std::filesystem::path path) {
  std::unique_lock lock(mutex_);
  entries_[name] = std::move(path);
}

std::optional<std::filesystem::path> DatasetRegistry::lookup(const std::string& name) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> DatasetRegistry::names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

DatasetRegistry DatasetRegistry::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "registry file not found: " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(path.string(), std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error(path.string(), "expected object of name -> path");
  DatasetRegistry reg;
  auto base = path.parent_path();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_string()) schema_error(it.key(), "expected path string");
    std::filesystem::path p = it.value().get<std::string>();
    reg.add(it.key(), p.is_absolute() ? p : base / p);
  }
  return reg;
}

DataHub::DataHub(DatasetRegistry registry) : registry_(std::move(registry)) {}

std::shared_ptr<const Dataset> DataHub::load(const std::string& name) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  }
  std::filesystem::path path;
  if (auto p = registry_.lookup(name)) {
    path = *p;
  } else if (std::filesystem::is_regular_file(name)) {
    path = name;
  } else {
    throw Error(ErrorCode::NotFound, "dataset '" + name + "' is not registered and is not a file");
  }
  auto loaded = std::make_shared<const Dataset>(load_dataset_file(path));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.emplace(name, loaded);
  return it->second;
}

void DataHub::put(const std::string& name, Dataset dataset) {
  auto ptr = std::make_shared<const Dataset>(std::move(dataset));
  std::unique_lock lock(mutex_);
  cache_[name] = std::move(ptr);
}

// ---------------------------------------------------------------------------
// Argument helpers

std::optional<std::string> text_of(const dsl::ApiArg& arg) {
  if (const auto* q = arg.as<dsl::QuotedString>()) return q->value;
  if (const auto* b = arg.as<dsl::Bare>()) return b->text;
  if (const auto* n = arg.as<dsl::Number>()) return n->text;
  if (const auto* e = arg.as<dsl::EntityRef>()) return e->kind + "#" + e->id;
  return std::nullopt;
}

NodeId resolve_node_ref(const dsl::ApiArg& arg) {
  if (const auto* e = arg.as<dsl::EntityRef>()) return e->id;
  if (const auto* n = arg.as<dsl::Number>()) return n->text;
  if (const auto* s = arg.as<dsl::SetLiteral>()) {
    if (s->items.size() != 1) {
      throw Error(ErrorCode::ArityError, "expected a single node reference, got a set of " +
                                            std::to_string(s->items.size()));
    }
    return resolve_node_ref(s->items.front());
  }
  auto text = text_of(arg);
  if (!text) throw Error(ErrorCode::ArityError, "expected a node reference, got a nested call");
  auto hash = text->find('#');
  if (hash != std::string::npos) {
    auto kind = trim(std::string_view(*text).substr(0, hash));
    auto id = trim(std::string_view(*text).substr(hash + 1));
    if ((kind.empty() || dsl::is_identifier(kind)) && !id.empty()) return id;
  }
  return trim(*text);
}

std::string GraphHandle::describe() const {
  return std::visit(
      [this](const auto& sel) -> std::string {
        using T = std::decay_t<decltype(sel)>;
        if constexpr (std::is_same_v<T, WholeGraph>) {
          return dataset_name;
        } else if constexpr (std::is_same_v<T, NodeInduced>) {
          return dataset_name + "[nodes=" + std::to_string(sel.nodes.size()) + "]";
        } else if constexpr (std::is_same_v<T, LinkInduced>) {
          return dataset_name + "[links=" + std::to_string(sel.links.size()) + "]";
        } else {
          return dataset_name + "/" + sel.graph_id;
        }
      },
      selection);
}

std::string GraphHandle::key() const {
  std::string out = dataset_name;
  std::visit(
      [&out](const auto& sel) {
        using T = std::decay_t<decltype(sel)>;
        if constexpr (std::is_same_v<T, NodeInduced>) {
          out += "|nodes";
          for (const auto& n : sel.nodes) out += "," + n;
        } else if constexpr (std::is_same_v<T, LinkInduced>) {
          out += sel.keep_all_nodes ? "|links+all" : "|links";
          for (const auto& [u, v] : sel.links) out += "," + u + "-" + v;
        } else if constexpr (std::is_same_v<T, InstanceSelection>) {
          out += "|instance," + sel.graph_id;
        }
      },
      selection);
  return out;
}

// ---------------------------------------------------------------------------
// GL execution

namespace {

enum class SubsetKind { None, All, Related, Explicit };

struct NodeSubset {
  SubsetKind kind = SubsetKind::None;
  std::vector<NodeId> ids;
};

struct LinkSubset {
  SubsetKind kind = SubsetKind::None;
  std::vector<std::pair<NodeId, NodeId>> pairs;
};

std::string lower_trim(const std::string& s) {
  std::string t = trim(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  return t;
}

// "all nodes", "all related links", "all paper nodes", "all citation links", ...
std::optional<SubsetKind> all_phrase(const std::string& s, std::string_view noun) {
  if (s.rfind("all ", 0) != 0 || s.size() < noun.size() + 4) return std::nullopt;
  if (s.compare(s.size() - noun.size(), noun.size(), noun) != 0) return std::nullopt;
  return s.find("related") != std::string::npos ? SubsetKind::Related : SubsetKind::All;
}

NodeSubset node_subset(const dsl::ApiArg& arg) {
  if (auto t = text_of(arg); t && !arg.as<dsl::EntityRef>()) {
    auto s = lower_trim(*t);
    if (auto kind = all_phrase(s, "nodes")) return {*kind, {}};
  }
  NodeSubset out{SubsetKind::Explicit, {}};
  if (const auto* set = arg.as<dsl::SetLiteral>()) {
    for (const auto& item : set->items) out.ids.push_back(resolve_node_ref(item));
  } else {
    out.ids.push_back(resolve_node_ref(arg));
  }
  return out;
}

LinkSubset link_subset(const dsl::ApiArg& arg) {
  if (auto t = text_of(arg)) {
    auto s = lower_trim(*t);
    if (auto kind = all_phrase(s, "links")) return {*kind, {}};
    throw Error(ErrorCode::ArityError, "link subset must be a set of node pairs or \"all links\"");
  }
  const auto* set = arg.as<dsl::SetLiteral>();
  if (!set) throw Error(ErrorCode::ArityError, "link subset must be a set of node pairs");
  LinkSubset out{SubsetKind::Explicit, {}};
  for (const auto& item : set->items) {
    const auto* pair = item.as<dsl::SetLiteral>();
    if (!pair || pair->items.size() != 2) {
      throw Error(ErrorCode::ArityError, "each link must be a two-element set {u, v}");
    }
    out.pairs.emplace_back(resolve_node_ref(pair->items[0]), resolve_node_ref(pair->items[1]));
  }
  return out;
}

bool has_link(const GraphDataset& g, const NodeId& u, const NodeId& v) {
  for (const auto& l : g.links()) {
    if (l.source == u && l.target == v) return true;
    if (!g.profile.is_directed && l.source == v && l.target == u) return true;
  }
  return false;
}

}  // namespace

GraphHandle execute_gl(const dsl::ApiCall& call, DataHub& hub) {
  if (call.func != "GL") throw Error(ErrorCode::UnknownFunction, "not a GL call: " + call.func);
  if (call.args.empty() || call.args.size() > 3) {
    throw Error(ErrorCode::ArityError, "GL expects (dataset[, nodes[, links]]), got " +
                                           std::to_string(call.args.size()) + " arguments");
  }
  auto name = text_of(call.args[0]);
  if (!name || call.args[0].as<dsl::Number>()) {
    throw Error(ErrorCode::ArityError, "GL's first argument must name a dataset");
  }
  auto dataset = hub.load(*name);
  GraphHandle handle{*name, WholeGraph{}};

  if (const auto* set = std::get_if<GraphInstanceSet>(dataset.get())) {
    if (call.args.size() >= 2) {
      auto sub = node_subset(call.args[1]);
      if (sub.kind == SubsetKind::Explicit) {
        if (sub.ids.size() != 1) throw Error(ErrorCode::ArityError, "select exactly one graph instance");
        if (!set->find(sub.ids.front())) {
          throw Error(ErrorCode::UnknownInstance,
                      "graph instance '" + sub.ids.front() + "' not in " + *name);
        }
        handle.selection = InstanceSelection{sub.ids.front()};
      }
    }
    return handle;
  }

  const auto& g = std::get<GraphDataset>(*dataset);
  NodeSubset nodes;
  LinkSubset links;
  if (call.args.size() >= 2) nodes = node_subset(call.args[1]);
  if (call.args.size() >= 3) links = link_subset(call.args[2]);

  for (const auto& id : nodes.ids) {
    if (!g.has_node(id)) throw Error(ErrorCode::UnknownNode, "node '" + id + "' not in " + *name);
  }
  for (const auto& [u, v] : links.pairs) {
    if (!has_link(g, u, v)) {
      throw Error(ErrorCode::UnknownLink, "link (" + u + ", " + v + ") not in " + *name);
    }
  }

  if (links.kind == SubsetKind::Explicit) {
    if (nodes.kind == SubsetKind::Explicit) {
      std::set<NodeId> allowed(nodes.ids.begin(), nodes.ids.end());
      for (const auto& [u, v] : links.pairs) {
        if (!allowed.count(u) || !allowed.count(v)) {
          throw Error(ErrorCode::UnknownLink, "link (" + u + ", " + v + ") leaves the node subset");
        }
      }
    }
    handle.selection = LinkInduced{links.pairs, nodes.kind == SubsetKind::All};
  } else if (nodes.kind == SubsetKind::Explicit) {
    handle.selection = NodeInduced{nodes.ids};
  }
  return handle;
}

// ---------------------------------------------------------------------------
// Materialization

GraphDataset node_induced(const GraphDataset& g, const std::vector<NodeId>& keep_ids) {
  std::set<NodeId> keep(keep_ids.begin(), keep_ids.end());
  std::vector<NodeRecord> nodes;
  for (const auto& n : g.nodes()) {
    if (keep.count(n.id)) nodes.push_back(n);
  }
  std::vector<LinkRecord> links;
  for (const auto& l : g.links()) {
    if (keep.count(l.source) && keep.count(l.target)) links.push_back(l);
  }
  DataProfile p = g.profile;
  p.order = nodes.size();
  p.size = links.size();
  return GraphDataset(std::move(p), std::move(nodes), std::move(links));
}

GraphDataset instance_graph(const GraphInstanceSet& set, const GraphInstance& inst) {
  DataProfile p;
  p.name = set.profile.name + "/" + inst.id;
  p.order = inst.nodes.size();
  p.size = inst.links.size();
  p.is_directed = set.profile.is_directed;
  p.is_weighted = set.profile.is_weighted;
  if (inst.label) p.extras["label"] = *inst.label;
  return GraphDataset(std::move(p), inst.nodes, inst.links);
}

GraphDataset materialize(const GraphHandle& handle, const Dataset& dataset) {
  if (const auto* set = std::get_if<GraphInstanceSet>(&dataset)) {
    const auto* sel = std::get_if<InstanceSelection>(&handle.selection);
    if (!sel) {
      throw Error(ErrorCode::ArityError,
                  "'" + handle.dataset_name + "' is a graph instance set; select an instance");
    }
    const auto* inst = set->find(sel->graph_id);
    if (!inst) throw Error(ErrorCode::UnknownInstance, "graph instance '" + sel->graph_id + "' not found");
    return instance_graph(*set, *inst);
  }
  const auto& g = std::get<GraphDataset>(dataset);
  return std::visit(
      [&](const auto& sel) -> GraphDataset {
        using T = std::decay_t<decltype(sel)>;
        if constexpr (std::is_same_v<T, WholeGraph>) {
          return g;
        } else if constexpr (std::is_same_v<T, NodeInduced>) {
          for (const auto& id : sel.nodes) {
            if (!g.has_node(id)) throw Error(ErrorCode::UnknownNode, "node '" + id + "' not found");
          }
          return node_induced(g, sel.nodes);
        } else if constexpr (std::is_same_v<T, LinkInduced>) {
          std::set<std::pair<NodeId, NodeId>> wanted;
          for (const auto& [u, v] : sel.links) {
            wanted.emplace(u, v);
            if (!g.profile.is_directed) wanted.emplace(v, u);
          }
          std::vector<LinkRecord> links;
          std::set<NodeId> endpoints;
          for (const auto& l : g.links()) {
            if (wanted.count({l.source, l.target})) {
              links.push_back(l);
              endpoints.insert(l.source);
              endpoints.insert(l.target);
            }
          }
          std::vector<NodeRecord> nodes;
          for (const auto& n : g.nodes()) {
            if (sel.keep_all_nodes || endpoints.count(n.id)) nodes.push_back(n);
          }
          DataProfile p = g.profile;
          p.order = nodes.size();
          p.size = links.size();
          return GraphDataset(std::move(p), std::move(nodes), std::move(links));
        } else {
          throw Error(ErrorCode::ArityError,
                      "'" + handle.dataset_name + "' is a single graph; instance selection is invalid");
        }
      },
      handle.selection);
}

GraphDataset materialize(const GraphHandle& handle, DataHub& hub) {
  return materialize(handle, *hub.load(handle.dataset_name));
}

// ---------------------------------------------------------------------------

Adjacency Adjacency::from(const GraphDataset& g) {
  Adjacency a;
  a.directed = g.profile.is_directed;
  a.link_count = g.links().size();
  a.ids.reserve(g.nodes().size());
  for (const auto& n : g.nodes()) {
    a.index.emplace(n.id, static_cast<int>(a.ids.size()));
    a.ids.push_back(n.id);
  }
  a.out.assign(a.ids.size(), {});
  for (const auto& l : g.links()) {
    int u = a.at(l.source);
    int v = a.at(l.target);
    a.out[u].push_back(v);
    if (!a.directed) a.out[v].push_back(u);
  }
  for (auto& row : a.out) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return a;
}

int Adjacency::at(std::string_view id) const {
  auto it = index.find(std::string(id));
  if (it == index.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(id) + "'");
  return it->second;
}

}  // namespace gtr
