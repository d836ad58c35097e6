#pragma once

// Graph data hub: the unified single-graph and graph-instance-set datasets,
// their on-disk JSON form, the name registry, and GL call execution.
//
// On-disk layout (UTF-8 JSON, key order preserved):
//
//   { "schema_version": 1,
//     "data_profile": { "name", "order", "size", "is_directed", "is_weighted", ...extras },
//     "nodes": { "<id>": { "features": [..], "label": ".." }, ... },
//     "links": [ { "source", "target", "weight", "timestamp", "label" }, ... ] }
//
//   { "schema_version": 1,
//     "data_profile": { "name", "graph_number", "is_directed", "is_weighted", ...extras },
//     "graph_set": { "<graph id>": { "nodes": [ids], "links": [[u, v] | {link}], "label": .. } } }

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "gtr/dsl.hpp"
#include "gtr/error.hpp"

namespace gtr {

using NodeId = std::string;
using Json = nlohmann::ordered_json;

/// Integers (by value) sort before everything else; other ids sort bytewise.
bool natural_less(std::string_view a, std::string_view b);
void natural_sort(std::vector<NodeId>& ids);

struct DataProfile {
  std::string name;
  std::size_t order = 0;
  std::size_t size = 0;
  bool is_directed = false;
  bool is_weighted = false;
  Json extras = Json::object();  // feature_dim, class_count, graph_number, test_idx, ...

  bool operator==(const DataProfile&) const = default;
};

struct NodeRecord {
  NodeId id;
  std::optional<std::vector<double>> features;
  std::optional<std::string> label;

  bool operator==(const NodeRecord&) const = default;
};

struct LinkRecord {
  NodeId source;
  NodeId target;
  std::optional<double> weight;
  std::optional<std::int64_t> timestamp;
  std::optional<std::string> label;

  bool operator==(const LinkRecord&) const = default;
};

class GraphDataset {
 public:
  DataProfile profile;

  GraphDataset() = default;
  GraphDataset(DataProfile profile, std::vector<NodeRecord> nodes, std::vector<LinkRecord> links);

  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<LinkRecord>& links() const { return links_; }

  const NodeRecord* find_node(std::string_view id) const;
  bool has_node(std::string_view id) const { return find_node(id) != nullptr; }

  /// Node ids listed in data_profile.test_idx (held out from classifiers).
  std::vector<NodeId> test_ids() const;

  bool operator==(const GraphDataset& other) const {
    return profile == other.profile && nodes_ == other.nodes_ && links_ == other.links_;
  }

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<LinkRecord> links_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct GraphInstance {
  std::string id;
  std::vector<NodeRecord> nodes;
  std::vector<LinkRecord> links;
  std::optional<std::string> label;

  bool operator==(const GraphInstance&) const = default;
};

class GraphInstanceSet {
 public:
  DataProfile profile;

  GraphInstanceSet() = default;
  GraphInstanceSet(DataProfile profile, std::vector<GraphInstance> graphs);

  const std::vector<GraphInstance>& graphs() const { return graphs_; }
  const GraphInstance* find(std::string_view id) const;
  std::vector<std::string> test_ids() const;

  bool operator==(const GraphInstanceSet& other) const {
    return profile == other.profile && graphs_ == other.graphs_;
  }

 private:
  std::vector<GraphInstance> graphs_;
  std::unordered_map<std::string, std::size_t> index_;
};

using Dataset = std::variant<GraphDataset, GraphInstanceSet>;

/// Invariant checks; returns every violation found (empty when valid).
std::vector<std::string> validate(const GraphDataset& g);
std::vector<std::string> validate(const GraphInstanceSet& s);

/// Parses and validates. Throws SchemaError or InvariantViolation.
Dataset dataset_from_json(const Json& doc);
Json dataset_to_json(const Dataset& dataset);

Dataset load_dataset_file(const std::filesystem::path& path);
void save_dataset_file(const Dataset& dataset, const std::filesystem::path& path);

/// Short name → path map. Unregistered names are treated as paths.
class DatasetRegistry {
 public:
  DatasetRegistry() = default;
  DatasetRegistry(const DatasetRegistry& other);
  DatasetRegistry& operator=(const DatasetRegistry& other);

  void add(const std::string& name, std::filesystem::path path);
  std::optional<std::filesystem::path> lookup(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Loads `{ "name": "relative/or/absolute/path", ... }`; relative paths are
  /// resolved against the registry file's directory.
  static DatasetRegistry from_file(const std::filesystem::path& path);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::filesystem::path> entries_;
};

// ---------------------------------------------------------------------------
// Handles and selections

struct WholeGraph {
  bool operator==(const WholeGraph&) const = default;
};
struct NodeInduced {
  std::vector<NodeId> nodes;
  bool operator==(const NodeInduced&) const = default;
};
struct LinkInduced {
  std::vector<std::pair<NodeId, NodeId>> links;
  bool keep_all_nodes = false;
  bool operator==(const LinkInduced&) const = default;
};
struct InstanceSelection {
  std::string graph_id;
  bool operator==(const InstanceSelection&) const = default;
};

using Selection = std::variant<WholeGraph, NodeInduced, LinkInduced, InstanceSelection>;

struct GraphHandle {
  std::string dataset_name;
  Selection selection;

  bool operator==(const GraphHandle&) const = default;
  std::string describe() const;
  /// Full selection listing, usable as a cache key.
  std::string key() const;
};

/// Loaded-dataset cache in front of a registry. Concurrent reads; loads and
/// registration are exclusive.
class DataHub {
 public:
  explicit DataHub(DatasetRegistry registry = {});

  std::shared_ptr<const Dataset> load(const std::string& name_or_path);

  /// Registers an in-memory dataset under `name` (used by tests and generators).
  void put(const std::string& name, Dataset dataset);

  DatasetRegistry& registry() { return registry_; }

 private:
  DatasetRegistry registry_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const Dataset>> cache_;
};

/// Resolves a GL call to a handle; validates every referenced id.
GraphHandle execute_gl(const dsl::ApiCall& call, DataHub& hub);

/// Concrete (sub)graph for a handle with recounted profile.
GraphDataset materialize(const GraphHandle& handle, DataHub& hub);
GraphDataset materialize(const GraphHandle& handle, const Dataset& dataset);

GraphDataset node_induced(const GraphDataset& g, const std::vector<NodeId>& nodes);
GraphDataset instance_graph(const GraphInstanceSet& set, const GraphInstance& instance);

/// Node id denoted by an argument: `paper#83826` → "83826", `"node#3"` → "3",
/// `{Paper#1}` → "1", `node #4` → "4", 7 → "7".
NodeId resolve_node_ref(const dsl::ApiArg& arg);

/// Plain string content of a quoted or bare argument.
std::optional<std::string> text_of(const dsl::ApiArg& arg);

// ---------------------------------------------------------------------------
// Index form used by the algorithms

struct Adjacency {
  std::vector<NodeId> ids;                   // dataset node order
  std::unordered_map<NodeId, int> index;
  std::vector<std::vector<int>> out;         // sorted, deduplicated neighbors
  bool directed = false;
  std::size_t link_count = 0;

  static Adjacency from(const GraphDataset& g);
  int at(std::string_view id) const;  // throws UnknownNode
};

}  // namespace gtr
