#pragma once

// BPR matrix factorization over timestamped user → item links.
//
// Layout: users are link sources, items are every other node. The most
// recent interaction of each user with at least two interactions is held
// out; the rest is training history.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gtr/embedding.hpp"
#include "gtr/graph_store.hpp"

namespace gtr::recsys {

struct BprHyper {
  std::size_t dim = 32;
  double learning_rate = 0.05;
  double l2 = 0.01;
  int epochs = 50;
  std::uint64_t seed = 42;
  int negatives = 0;  // per positive; 0 = every unseen item
};

struct InteractionData {
  std::vector<std::string> users;  // natural order
  std::vector<std::string> items;  // natural order
  std::map<std::string, std::set<std::string>> history;        // training positives
  std::vector<std::pair<std::string, std::string>> holdout;    // (user, item)
};

/// Throws NotBipartite when a node is both a source and a target.
InteractionData split_interactions(const GraphDataset& g);

class BprModel {
 public:
  EmbeddingTable users;
  EmbeddingTable items;
  BprHyper hyper;
  std::map<std::string, std::set<std::string>> history;
  std::vector<double> epoch_loss;  // objective before training, then after each epoch

  double score(const std::string& user, const std::string& item) const;  // u·i

  Json to_json() const;
  static BprModel from_json(const Json& doc);
};

/// Throws EmptyTraining when no training interaction exists.
BprModel train_bpr(const InteractionData& data, const BprHyper& hyper);
BprModel train_bpr(const GraphDataset& g, const BprHyper& hyper);

/// Mean −ln σ(x_ui − x_uj) over every training positive i and unseen item j.
double mean_pairwise_loss(const BprModel& model);

/// σ(u·i). Throws UnknownUser / UnknownItem.
double recommendation(const BprModel& model, const std::string& user, const std::string& item);

/// Top-k unseen items by score, ties by ascending natural item id.
std::vector<std::pair<std::string, double>> topk_recommendation(const BprModel& model,
                                                                const std::string& user, long long k);

/// Per-user AUC of the held-out item against all unseen items, averaged.
double holdout_auc(const BprModel& model, const std::vector<std::pair<std::string, std::string>>& holdout);

/// Regularized loss of one (u, i⁺, i⁻) triplet and its gradient:
/// −ln σ(u·(i−j)) + l2/2 (|u|² + |i|² + |j|²).
struct TripletGradient {
  double loss = 0.0;
  std::vector<double> du, di, dj;
};
TripletGradient bpr_triplet(std::span<const double> u, std::span<const double> i,
                            std::span<const double> j, double l2);

/// Synthetic block dataset: users u0.. and items i0.., user b·(users/blocks)+x
/// interacts with every item of block b, in increasing timestamp order.
GraphDataset planted_blocks(int users, int items, int blocks, std::uint64_t seed);

double sigmoid(double x);

}  // namespace gtr::recsys
