#pragma once

// domain:function registry and the default graph model implementations.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "gtr/dsl.hpp"
#include "gtr/graph_store.hpp"
#include "gtr/kg.hpp"
#include "gtr/recsys.hpp"
#include "gtr/value.hpp"

namespace gtr::hub {

enum class ParamType { Node, User, Item, Entity, Relation, Instance, Count, Bool, Text };

std::string_view type_name(ParamType t);

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::Text;
  bool required = true;
};

class ModelHub;

/// Arguments bound to a descriptor's parameters, plus the graph the call
/// operates on.
class CallContext {
 public:
  CallContext(GraphHandle graph, DataHub& data, ModelHub& models, std::map<std::string, dsl::ApiArg> args)
      : graph_(std::move(graph)), data_(data), models_(models), args_(std::move(args)) {}

  const GraphHandle& handle() const { return graph_; }
  DataHub& data() const { return data_; }
  ModelHub& models() const { return models_; }

  bool has(const std::string& name) const { return args_.count(name) > 0; }
  const dsl::ApiArg& arg(const std::string& name) const;
  /// Identifier denoted by `kind#id`, a quoted string, a number, or `{x}`.
  std::string id(const std::string& name) const;
  long long count(const std::string& name) const;
  std::optional<long long> count_or_none(const std::string& name) const;
  std::optional<bool> flag(const std::string& name) const;

  /// Materialized graph for the handle (memoized per handle).
  std::shared_ptr<const GraphDataset> graph() const;
  /// The instance set behind the handle; ArityError for single graphs.
  std::shared_ptr<const Dataset> dataset() const;

 private:
  GraphHandle graph_;
  DataHub& data_;
  ModelHub& models_;
  std::map<std::string, dsl::ApiArg> args_;
};

using Invoke = std::function<ReasoningValue(const CallContext&)>;

struct Descriptor {
  std::string domain;
  std::string function;
  std::vector<ParamSpec> params;  // after the graph and domain:function arguments
  std::string result_kind;
  std::string summary;
  bool baseline_substitute = false;
  Invoke invoke;

  std::string key() const { return domain + ":" + function; }
  std::size_t min_arity() const;
  std::size_t max_arity() const { return params.size(); }
};

/// Concurrent reads, exclusive registration.
class ModelRegistry {
 public:
  void add(Descriptor d);  // throws DuplicateKey
  /// Case-insensitive; '-' and '_' are interchangeable. Throws Malformed
  /// (no single ':') or UnknownFunction (with near-miss suggestions).
  const Descriptor& resolve(std::string_view domain_function) const;
  const Descriptor* find(std::string_view domain, std::string_view function) const;
  std::vector<std::string> suggestions(std::string_view domain_function, std::size_t limit = 3) const;
  std::vector<std::string> keys() const;
  Json catalog() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Descriptor>> entries_;
};

/// Splits "domain:function", normalizing case and '-' → '_'.
std::pair<std::string, std::string> split_domain_function(std::string_view text);

/// Binds positional and `name:value` keyword arguments, checking arity and
/// parameter types. Throws ArityError.
std::map<std::string, dsl::ApiArg> bind_arguments(const Descriptor& d, const std::vector<dsl::ApiArg>& args);

struct HubSettings {
  std::uint64_t seed = 42;
  recsys::BprHyper bpr;
  kg::TransEHyper transe;
};

/// Registry plus the lazily trained model cache it dispatches into.
class ModelHub {
 public:
  explicit ModelHub(HubSettings settings = {}, bool with_defaults = true);

  ModelRegistry& registry() { return registry_; }
  const ModelRegistry& registry() const { return registry_; }
  const HubSettings& settings() const { return settings_; }

  /// Shared, build-once cache keyed by string.
  template <typename T>
  std::shared_ptr<const T> cached(const std::string& key, const std::function<T()>& build) {
    {
      std::lock_guard lock(cache_mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return std::static_pointer_cast<const T>(it->second);
    }
    auto value = std::make_shared<const T>(build());
    std::lock_guard lock(cache_mutex_);
    auto [it, inserted] = cache_.emplace(key, value);
    return std::static_pointer_cast<const T>(it->second);
  }

  /// Installs a pre-trained model for a dataset name (e.g. from a checkpoint).
  void put_bpr(const std::string& dataset, recsys::BprModel model);
  void put_transe(const std::string& dataset, kg::KgModel model);

  std::shared_ptr<const recsys::BprModel> bpr_for(const CallContext& ctx);
  std::shared_ptr<const kg::KgModel> transe_for(const CallContext& ctx);

 private:
  HubSettings settings_;
  ModelRegistry registry_;
  std::mutex cache_mutex_;
  std::map<std::string, std::shared_ptr<const void>> cache_;
};

void register_toolx(ModelRegistry& r);
void register_kmeans(ModelRegistry& r);
void register_bpr(ModelRegistry& r);
void register_transe(ModelRegistry& r);
void register_baselines(ModelRegistry& r);

std::size_t edit_distance(std::string_view a, std::string_view b);

/// Checkpoint document {"kind": "bpr"|"transe", "dataset", "model"}.
Json make_checkpoint(const std::string& dataset, const recsys::BprModel& model);
Json make_checkpoint(const std::string& dataset, const kg::KgModel& model);
/// Installs a checkpoint for its dataset; returns "kind:dataset". Throws SchemaError.
std::string install_checkpoint(ModelHub& hub, const Json& doc);

}  // namespace gtr::hub
