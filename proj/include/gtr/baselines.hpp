#pragma once

// Classical stand-ins occupying the graph_bert:topic and
// seg_bert:molecule_function registry names.

#include <map>
#include <string>
#include <vector>

#include "gtr/graph_store.hpp"

namespace gtr::baselines {

struct PropagationOptions {
  int max_iterations = 50;
  double tolerance = 1e-6;  // max absolute change of any distribution entry
};

/// Label distributions after propagation. Training nodes (labeled and not in
/// test_idx) stay clamped to their one-hot rows.
class LabelPropagation {
 public:
  static LabelPropagation fit(const GraphDataset& g, const PropagationOptions& options = {});

  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<double>& distribution(const NodeId& node) const;  // throws UnknownNode
  bool is_clamped(const NodeId& node) const;
  int iterations() const { return iterations_; }

  /// Argmax label, ties broken by ascending class name.
  std::string predict(const NodeId& node) const;

 private:
  std::vector<std::string> classes_;
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<double>> dist_;
  std::vector<bool> clamped_;
  int iterations_ = 0;
};

/// Baseline node topic: propagated label of `node`.
std::string topic(const GraphDataset& g, const NodeId& node);

using WlHistogram = std::map<std::string, long long>;

/// Subtree-pattern counts over `iterations` relabeling rounds, seeded with node
/// degrees. Pattern keys are canonical signature strings, so histograms from
/// different graphs are directly comparable.
WlHistogram wl_histogram(const GraphInstance& g, int iterations = 3);

double cosine(const WlHistogram& a, const WlHistogram& b);

/// Cosine 1-NN over labeled training instances (not in test_idx); ties by
/// ascending natural instance id.
class WlClassifier {
 public:
  static WlClassifier fit(const GraphInstanceSet& set, int iterations = 3);
  std::string predict(const std::string& instance_id) const;  // throws UnknownInstance
  std::string predict(const GraphInstance& instance) const;
  std::size_t training_size() const { return train_.size(); }

 private:
  int iterations_ = 3;
  std::map<std::string, WlHistogram> all_;
  std::vector<std::pair<std::string, std::string>> train_;  // (id, label), natural order
};

std::string molecule_function(const GraphInstanceSet& set, const std::string& instance_id);

}  // namespace gtr::baselines
