#pragma once

// Social-network community reasoning: KMeans over rows of the
// common-neighbor affinity matrix.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gtr/graph_store.hpp"

namespace gtr::community {

struct KMeansOptions {
  int max_iterations = 300;
  double tolerance = 1e-6;  // max centroid shift
};

class CommunityAssignment {
 public:
  CommunityAssignment() = default;
  CommunityAssignment(std::vector<std::pair<NodeId, int>> labels, int k, std::uint64_t seed);

  /// Node → community id, nodes in natural order.
  const std::vector<std::pair<NodeId, int>>& labels() const { return labels_; }
  int k() const { return k_; }
  std::uint64_t seed() const { return seed_; }

  int label_of(const NodeId& node) const;  // throws UnknownNode
  std::vector<std::size_t> sizes() const;

 private:
  std::vector<std::pair<NodeId, int>> labels_;
  std::unordered_map<NodeId, int> lookup_;
  int k_ = 0;
  std::uint64_t seed_ = 0;
};

/// ceil(sqrt(|V| / 2)), at least 1.
int default_k(std::size_t node_count);

/// |N(i) ∩ N(j)| over the undirected view, rows in natural node order.
std::vector<std::vector<double>> common_neighbor_matrix(const GraphDataset& g,
                                                        std::vector<NodeId>* order = nullptr);

/// Lloyd iterations with k-means++ seeding. Points are processed in natural
/// node order and community ids are numbered by first appearance in that
/// order, so the result does not depend on node insertion order.
CommunityAssignment fit_communities(const GraphDataset& g, std::optional<int> k, std::uint64_t seed,
                                    const KMeansOptions& options = {});

/// Clusters arbitrary points; returns a hard label per point with exactly k
/// non-empty clusters (requires 1 <= k <= points.size()).
std::vector<int> kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                        const KMeansOptions& options = {});

int community(const CommunityAssignment& a, const NodeId& node);
int community_count(const CommunityAssignment& a);
long long community_size(const CommunityAssignment& a, const NodeId& node);
double community_avg_size(const CommunityAssignment& a);
long long community_max_size(const CommunityAssignment& a);
bool common_community_check(const CommunityAssignment& a, const NodeId& first, const NodeId& second);

}  // namespace gtr::community
