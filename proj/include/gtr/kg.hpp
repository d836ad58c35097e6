#pragma once

// TransE over knowledge-graph triples stored as links with label = relation.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gtr/embedding.hpp"
#include "gtr/graph_store.hpp"

namespace gtr::kg {

struct TransEHyper {
  std::size_t dim = 50;
  double margin = 1.0;
  double learning_rate = 0.01;
  int epochs = 100;
  std::uint64_t seed = 42;
};

struct Triple {
  std::string head;
  std::string relation;
  std::string tail;
  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

/// Throws MissingRelationLabels when a link has no label.
std::vector<Triple> triples_of(const GraphDataset& g);

class KgModel {
 public:
  EmbeddingTable entities;
  EmbeddingTable relations;
  TransEHyper hyper;
  std::vector<Triple> triples;

  Json to_json() const;
  static KgModel from_json(const Json& doc);
};

/// Random init in ±6/√d with entity rows normalized; `epochs` = 0 returns it.
KgModel init_transe(std::vector<std::string> entities, std::vector<std::string> relations,
                    const TransEHyper& hyper);

/// Called with the epoch index after each epoch's entity renormalization.
using EpochHook = std::function<void(const KgModel&, int)>;

KgModel train_transe(const GraphDataset& g, const TransEHyper& hyper, const EpochHook& hook = {});
KgModel train_transe(std::vector<std::string> entities, const std::vector<Triple>& triples,
                     const TransEHyper& hyper, const EpochHook& hook = {});

/// ‖h + r − t‖₂
double distance(std::span<const double> h, std::span<const double> r, std::span<const double> t);

/// [margin + d(h+r,t) − d(h'+r,t')]₊ with gradients for each of the five
/// vectors treated as independent inputs.
struct MarginGradient {
  double loss = 0.0;
  std::vector<double> dh, dr, dt, dh_neg, dt_neg;
};
MarginGradient margin_loss(std::span<const double> h, std::span<const double> r,
                           std::span<const double> t, std::span<const double> h_neg,
                           std::span<const double> t_neg, double margin);

/// argmin_t d(h+r, t); ties by ascending natural id.
std::string search_tail_entity(const KgModel& m, const std::string& head, const std::string& relation);
std::string search_head_entity(const KgModel& m, const std::string& relation, const std::string& tail);
std::string search_relation(const KgModel& m, const std::string& head, const std::string& tail);

/// Filtered tail-prediction hits@k: other known true tails are skipped when ranking.
double filtered_hits_at(const KgModel& m, const std::vector<Triple>& test, int k);

}  // namespace gtr::kg
