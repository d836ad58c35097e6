#pragma once

// Graph property reasoning over unweighted hop distances.
//
// Eccentricity-family functions require a connected graph (strongly
// connected when directed) and throw DisconnectedGraph otherwise.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtr/graph_store.hpp"

namespace gtr::toolx {

struct Ratio {
  long long numerator = 0;
  long long denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  bool operator==(const Ratio&) const = default;
};

/// Reduced fraction; denominator must be positive.
Ratio make_ratio(long long numerator, long long denominator);

using NodeSet = std::vector<NodeId>;                          // natural order
using NodeMap = std::vector<std::pair<NodeId, long long>>;    // natural key order

long long order(const GraphDataset& g);
long long size(const GraphDataset& g);

/// |E| / (|V|(|V|-1)), doubled when undirected. Defaults to the profile's
/// directedness. Throws DegenerateGraph when |V| < 2.
Ratio density(const GraphDataset& g, std::optional<bool> is_directed = std::nullopt);

NodeMap eccentricity(const GraphDataset& g);
long long eccentricity(const GraphDataset& g, const NodeId& node);
long long radius(const GraphDataset& g);
long long diameter(const GraphDataset& g);
NodeSet center(const GraphDataset& g);
NodeSet periphery(const GraphDataset& g);

/// Hop count of a shortest a-b path. Throws NoPath / UnknownNode.
long long shortest_path(const GraphDataset& g, const NodeId& a, const NodeId& b);

/// Mean of the full |V|x|V| distance matrix (self-distances included), which
/// is the convention that yields 2.86 on lollipop(4, 6).
double avg_path_length(const GraphDataset& g);

long long max_path_length(const GraphDataset& g);

/// Smallest distance over distinct connected pairs; 1 whenever an edge exists.
long long min_path_length(const GraphDataset& g);

/// BFS distances from `source`; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const Adjacency& adj, int source);

}  // namespace gtr::toolx
