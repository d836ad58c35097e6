#include "gtr/toolx.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace gtr::toolx {

Ratio make_ratio(long long numerator, long long denominator) {
  long long g = std::gcd(numerator, denominator);
  if (g == 0) g = 1;
  return Ratio{numerator / g, denominator / g};
}

std::vector<int> bfs_distances(const Adjacency& adj, int source) {
  std::vector<int> dist(adj.ids.size(), -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj.out[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

namespace {

struct Eccentricities {
  Adjacency adj;
  std::vector<long long> ecc;
};

Eccentricities all_eccentricities(const GraphDataset& g) {
  Eccentricities out{Adjacency::from(g), {}};
  const auto n = out.adj.ids.size();
  if (n == 0) throw Error(ErrorCode::DegenerateGraph, "eccentricity of an empty graph is undefined");
  out.ecc.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto dist = bfs_distances(out.adj, static_cast<int>(s));
    long long worst = 0;
    for (int d : dist) {
      if (d < 0) {
        throw Error(ErrorCode::DisconnectedGraph,
                    "graph '" + g.profile.name + "' is not connected; eccentricities are infinite");
      }
      worst = std::max<long long>(worst, d);
    }
    out.ecc[s] = worst;
  }
  return out;
}

NodeSet select(const Eccentricities& e, long long target) {
  NodeSet out;
  for (std::size_t i = 0; i < e.ecc.size(); ++i) {
    if (e.ecc[i] == target) out.push_back(e.adj.ids[i]);
  }
  natural_sort(out);
  return out;
}

}  // namespace

long long order(const GraphDataset& g) { return static_cast<long long>(g.nodes().size()); }

long long size(const GraphDataset& g) { return static_cast<long long>(g.links().size()); }

Ratio density(const GraphDataset& g, std::optional<bool> is_directed) {
  const long long n = order(g);
  if (n < 2) throw Error(ErrorCode::DegenerateGraph, "density needs at least two nodes");
  const bool directed = is_directed.value_or(g.profile.is_directed);
  const long long links = size(g);
  return make_ratio(directed ? links : 2 * links, n * (n - 1));
}

NodeMap eccentricity(const GraphDataset& g) {
  auto e = all_eccentricities(g);
  NodeMap out;
  for (std::size_t i = 0; i < e.ecc.size(); ++i) out.emplace_back(e.adj.ids[i], e.ecc[i]);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return natural_less(a.first, b.first); });
  return out;
}

long long eccentricity(const GraphDataset& g, const NodeId& node) {
  auto adj = Adjacency::from(g);
  auto dist = bfs_distances(adj, adj.at(node));
  long long worst = 0;
  for (int d : dist) {
    if (d < 0) {
      throw Error(ErrorCode::DisconnectedGraph,
                  "graph '" + g.profile.name + "' is not connected; eccentricity is infinite");
    }
    worst = std::max<long long>(worst, d);
  }
  return worst;
}

long long radius(const GraphDataset& g) {
  auto e = all_eccentricities(g);
  return *std::min_element(e.ecc.begin(), e.ecc.end());
}

long long diameter(const GraphDataset& g) {
  auto e = all_eccentricities(g);
  return *std::max_element(e.ecc.begin(), e.ecc.end());
}

NodeSet center(const GraphDataset& g) {
  auto e = all_eccentricities(g);
  return select(e, *std::min_element(e.ecc.begin(), e.ecc.end()));
}

NodeSet periphery(const GraphDataset& g) {
  auto e = all_eccentricities(g);
  return select(e, *std::max_element(e.ecc.begin(), e.ecc.end()));
}

long long shortest_path(const GraphDataset& g, const NodeId& a, const NodeId& b) {
  auto adj = Adjacency::from(g);
  int target = adj.at(b);
  auto dist = bfs_distances(adj, adj.at(a));
  if (dist[target] < 0) throw Error(ErrorCode::NoPath, "no path from '" + a + "' to '" + b + "'");
  return dist[target];
}

double avg_path_length(const GraphDataset& g) {
  auto adj = Adjacency::from(g);
  const auto n = adj.ids.size();
  if (n == 0) throw Error(ErrorCode::DegenerateGraph, "average path length of an empty graph");
  long long total = 0;
  for (std::size_t s = 0; s < n; ++s) {
    for (int d : bfs_distances(adj, static_cast<int>(s))) {
      if (d < 0) {
        throw Error(ErrorCode::DisconnectedGraph,
                    "graph '" + g.profile.name + "' is not connected; average path length is infinite");
      }
      total += d;
    }
  }
  return static_cast<double>(total) / static_cast<double>(n * n);
}

long long max_path_length(const GraphDataset& g) { return diameter(g); }

long long min_path_length(const GraphDataset& g) {
  auto adj = Adjacency::from(g);
  const auto n = adj.ids.size();
  if (n < 2) throw Error(ErrorCode::DegenerateGraph, "path lengths need at least two nodes");
  long long best = -1;
  for (std::size_t s = 0; s < n; ++s) {
    auto dist = bfs_distances(adj, static_cast<int>(s));
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s || dist[t] < 0) continue;
      if (best < 0 || dist[t] < best) best = dist[t];
    }
  }
  if (best < 0) throw Error(ErrorCode::NoPath, "no two distinct nodes are connected");
  return best;
}

}  // namespace gtr::toolx
