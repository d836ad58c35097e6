#include "gtr/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gtr/rng.hpp"

namespace gtr::community {

CommunityAssignment::CommunityAssignment(std::vector<std::pair<NodeId, int>> labels, int k,
                                         std::uint64_t seed)
    : labels_(std::move(labels)), k_(k), seed_(seed) {
  for (const auto& [node, label] : labels_) lookup_.emplace(node, label);
}

int CommunityAssignment::label_of(const NodeId& node) const {
  auto it = lookup_.find(node);
  if (it == lookup_.end()) throw Error(ErrorCode::UnknownNode, "unknown user node '" + node + "'");
  return it->second;
}

std::vector<std::size_t> CommunityAssignment::sizes() const {
  std::vector<std::size_t> out(k_, 0);
  for (const auto& [node, label] : labels_) ++out[label];
  return out;
}

int default_k(std::size_t node_count) {
  return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(node_count) / 2.0))));
}

std::vector<std::vector<double>> common_neighbor_matrix(const GraphDataset& g,
                                                        std::vector<NodeId>* order) {
  std::vector<NodeId> ids;
  for (const auto& n : g.nodes()) ids.push_back(n.id);
  natural_sort(ids);
  std::unordered_map<NodeId, int> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<int>(i));

  const auto n = ids.size();
  std::vector<std::set<int>> neighbors(n);
  for (const auto& l : g.links()) {
    int u = index.at(l.source);
    int v = index.at(l.target);
    if (u == v) continue;
    neighbors[u].insert(v);
    neighbors[v].insert(u);
  }
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t w = 0; w < n; ++w) {
    for (int a : neighbors[w]) {
      for (int b : neighbors[w]) m[a][b] += 1.0;
    }
  }
  if (order) *order = std::move(ids);
  return m;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::vector<std::vector<double>> plus_plus_init(const std::vector<std::vector<double>>& pts, int k,
                                                Rng& rng) {
  std::vector<std::vector<double>> centers;
  centers.push_back(pts[rng.below(pts.size())]);
  std::vector<double> best(pts.size(), std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      best[i] = std::min(best[i], sq_dist(pts[i], centers.back()));
      total += best[i];
    }
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = rng.below(pts.size());
    } else {
      double r = rng.unit() * total;
      for (pick = 0; pick + 1 < pts.size(); ++pick) {
        r -= best[pick];
        if (r < 0.0) break;
      }
    }
    centers.push_back(pts[pick]);
  }
  return centers;
}

}  // namespace

std::vector<int> kmeans(const std::vector<std::vector<double>>& pts, int k, std::uint64_t seed,
                        const KMeansOptions& options) {
  if (pts.empty()) throw Error(ErrorCode::EmptyGraph, "no points to cluster");
  if (k < 1 || k > static_cast<int>(pts.size())) {
    throw Error(ErrorCode::BadK, "k must be in [1, " + std::to_string(pts.size()) + "], got " +
                                     std::to_string(k));
  }
  Rng rng(seed);
  auto centers = plus_plus_init(pts, k, rng);
  const std::size_t dim = pts.front().size();
  std::vector<int> labels(pts.size(), 0);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    std::vector<double> dist(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        double d = sq_dist(pts[i], centers[c]);
        if (d < best) {
          best = d;
          labels[i] = c;
        }
      }
      dist[i] = best;
    }

    // Re-seed empty clusters from the farthest point of a multi-member cluster.
    std::vector<int> count(k, 0);
    for (int l : labels) ++count[l];
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      std::size_t far = pts.size();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (count[labels[i]] < 2) continue;
        if (far == pts.size() || dist[i] > dist[far]) far = i;
      }
      --count[labels[far]];
      labels[far] = c;
      count[c] = 1;
      dist[far] = 0.0;
    }

    std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t d = 0; d < dim; ++d) next[labels[i]][d] += pts[i][d];
    }
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      for (auto& x : next[c]) x /= count[c];
      shift = std::max(shift, std::sqrt(sq_dist(next[c], centers[c])));
    }
    centers = std::move(next);
    if (shift <= options.tolerance) break;
  }
  return labels;
}

CommunityAssignment fit_communities(const GraphDataset& g, std::optional<int> k, std::uint64_t seed,
                                    const KMeansOptions& options) {
  if (g.nodes().empty()) throw Error(ErrorCode::EmptyGraph, "graph '" + g.profile.name + "' has no nodes");
  const int clusters = k.value_or(default_k(g.nodes().size()));
  std::vector<NodeId> order;
  auto points = common_neighbor_matrix(g, &order);
  auto raw = kmeans(points, clusters, seed, options);

  std::vector<int> renumber(clusters, -1);
  int next = 0;
  std::vector<std::pair<NodeId, int>> labels;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (renumber[raw[i]] < 0) renumber[raw[i]] = next++;
    labels.emplace_back(order[i], renumber[raw[i]]);
  }
  return CommunityAssignment(std::move(labels), clusters, seed);
}

int community(const CommunityAssignment& a, const NodeId& node) { return a.label_of(node); }

int community_count(const CommunityAssignment& a) {
  auto s = a.sizes();
  return static_cast<int>(std::count_if(s.begin(), s.end(), [](std::size_t x) { return x > 0; }));
}

long long community_size(const CommunityAssignment& a, const NodeId& node) {
  return static_cast<long long>(a.sizes()[a.label_of(node)]);
}

double community_avg_size(const CommunityAssignment& a) {
  return static_cast<double>(a.labels().size()) / community_count(a);
}

long long community_max_size(const CommunityAssignment& a) {
  auto s = a.sizes();
  return static_cast<long long>(*std::max_element(s.begin(), s.end()));
}

bool common_community_check(const CommunityAssignment& a, const NodeId& first, const NodeId& second) {
  return a.label_of(first) == a.label_of(second);
}

}  // namespace gtr::community
