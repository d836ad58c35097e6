#include "gtr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gtr::baselines {

LabelPropagation LabelPropagation::fit(const GraphDataset& g, const PropagationOptions& options) {
  LabelPropagation lp;
  auto held = g.test_ids();
  std::set<NodeId> test(held.begin(), held.end());

  std::set<std::string> classes;
  for (const auto& n : g.nodes()) {
    lp.index_.emplace(n.id, lp.nodes_.size());
    lp.nodes_.push_back(n.id);
    if (n.label && !test.count(n.id)) classes.insert(*n.label);
  }
  if (classes.empty()) {
    throw Error(ErrorCode::NoLabeledNodes, "graph '" + g.profile.name + "' has no labeled training nodes");
  }
  lp.classes_.assign(classes.begin(), classes.end());

  const std::size_t n = lp.nodes_.size(), c = lp.classes_.size();
  std::vector<std::vector<std::size_t>> neighbors(n);
  for (const auto& l : g.links()) {
    auto u = lp.index_.at(l.source), v = lp.index_.at(l.target);
    if (u == v) continue;
    neighbors[u].push_back(v);
    neighbors[v].push_back(u);
  }
  for (auto& list : neighbors) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  lp.dist_.assign(n, std::vector<double>(c, 0.0));
  lp.clamped_.assign(n, false);
  for (const auto& node : g.nodes()) {
    if (!node.label || test.count(node.id)) continue;
    auto i = lp.index_.at(node.id);
    auto k = std::lower_bound(lp.classes_.begin(), lp.classes_.end(), *node.label) - lp.classes_.begin();
    lp.dist_[i][k] = 1.0;
    lp.clamped_[i] = true;
  }

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    auto next = lp.dist_;
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (lp.clamped_[v] || neighbors[v].empty()) continue;
      std::fill(next[v].begin(), next[v].end(), 0.0);
      for (auto u : neighbors[v]) {
        for (std::size_t k = 0; k < c; ++k) next[v][k] += lp.dist_[u][k];
      }
      for (std::size_t k = 0; k < c; ++k) {
        next[v][k] /= static_cast<double>(neighbors[v].size());
        change = std::max(change, std::fabs(next[v][k] - lp.dist_[v][k]));
      }
    }
    lp.dist_ = std::move(next);
    lp.iterations_ = iter + 1;
    if (change < options.tolerance) break;
  }
  return lp;
}

const std::vector<double>& LabelPropagation::distribution(const NodeId& node) const {
  auto it = index_.find(node);
  if (it == index_.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + node + "'");
  return dist_[it->second];
}

bool LabelPropagation::is_clamped(const NodeId& node) const {
  auto it = index_.find(node);
  if (it == index_.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + node + "'");
  return clamped_[it->second];
}

std::string LabelPropagation::predict(const NodeId& node) const {
  const auto& d = distribution(node);
  std::size_t best = 0;
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k] > d[best]) best = k;
  }
  return classes_[best];
}

std::string topic(const GraphDataset& g, const NodeId& node) {
  if (!g.has_node(node)) throw Error(ErrorCode::UnknownNode, "unknown node '" + node + "'");
  return LabelPropagation::fit(g).predict(node);
}

// ---------------------------------------------------------------------------

WlHistogram wl_histogram(const GraphInstance& g, int iterations) {
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index.emplace(g.nodes[i].id, i);
  std::vector<std::vector<std::size_t>> neighbors(g.nodes.size());
  for (const auto& l : g.links) {
    auto u = index.at(l.source), v = index.at(l.target);
    if (u == v) continue;
    neighbors[u].push_back(v);
    neighbors[v].push_back(u);
  }

  std::vector<std::string> labels(g.nodes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = std::to_string(neighbors[i].size());
  WlHistogram hist;
  for (const auto& l : labels) ++hist["0:" + l];
  for (int round = 1; round <= iterations; ++round) {
    std::vector<std::string> next(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      std::vector<std::string> around;
      for (auto u : neighbors[i]) around.push_back(labels[u]);
      std::sort(around.begin(), around.end());
      std::string sig = labels[i] + "(";
      for (std::size_t k = 0; k < around.size(); ++k) sig += (k ? "," : "") + around[k];
      next[i] = sig + ")";
    }
    labels = std::move(next);
    for (const auto& l : labels) ++hist[std::to_string(round) + ":" + l];
  }
  return hist;
}

double cosine(const WlHistogram& a, const WlHistogram& b) {
  double num = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) {
    na += static_cast<double>(v) * v;
    auto it = b.find(k);
    if (it != b.end()) num += static_cast<double>(v) * it->second;
  }
  for (const auto& [k, v] : b) nb += static_cast<double>(v) * v;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return num / (std::sqrt(na) * std::sqrt(nb));
}

WlClassifier WlClassifier::fit(const GraphInstanceSet& set, int iterations) {
  WlClassifier c;
  c.iterations_ = iterations;
  auto held = set.test_ids();
  std::set<std::string> test(held.begin(), held.end());
  for (const auto& g : set.graphs()) {
    c.all_.emplace(g.id, wl_histogram(g, iterations));
    if (g.label && !test.count(g.id)) c.train_.emplace_back(g.id, *g.label);
  }
  if (c.train_.empty()) {
    throw Error(ErrorCode::EmptyTrainingSet, "instance set '" + set.profile.name + "' has no labeled training graphs");
  }
  std::sort(c.train_.begin(), c.train_.end(),
            [](const auto& a, const auto& b) { return natural_less(a.first, b.first); });
  return c;
}

namespace {

std::string nearest(const WlHistogram& query, const std::map<std::string, WlHistogram>& all,
                    const std::vector<std::pair<std::string, std::string>>& train) {
  double best = -1.0;
  std::string label;
  for (const auto& [id, l] : train) {
    double s = cosine(query, all.at(id));
    if (s > best) {
      best = s;
      label = l;
    }
  }
  return label;
}

}  // namespace

std::string WlClassifier::predict(const std::string& instance_id) const {
  auto it = all_.find(instance_id);
  if (it == all_.end()) throw Error(ErrorCode::UnknownInstance, "unknown graph instance '" + instance_id + "'");
  return nearest(it->second, all_, train_);
}

std::string WlClassifier::predict(const GraphInstance& instance) const {
  return nearest(wl_histogram(instance, iterations_), all_, train_);
}

std::string molecule_function(const GraphInstanceSet& set, const std::string& instance_id) {
  if (!set.find(instance_id)) throw Error(ErrorCode::UnknownInstance, "unknown graph instance '" + instance_id + "'");
  return WlClassifier::fit(set).predict(instance_id);
}

}  // namespace gtr::baselines
