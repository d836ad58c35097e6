#pragma once

// Deterministic constructors for the classic graphs of the graph property
// reasoning (GPR) dataset. Node numbering follows the networkx generators of
// the same names, so property values match the published ones.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gtr/graph_store.hpp"

namespace gtr::gpr {

using Edge = std::pair<int, int>;

/// Undirected graph over ids "0".."n-1"; duplicate edges are dropped.
GraphDataset from_edges(std::string name, int n, const std::vector<Edge>& edges);

GraphDataset lollipop(int clique, int tail);
GraphDataset barbell(int bell, int bridge);
GraphDataset path(int n);
GraphDataset cycle(int n);
GraphDataset complete(int n);
GraphDataset star(int leaves);
GraphDataset wheel(int n);
GraphDataset ladder(int rungs);
GraphDataset circular_ladder(int rungs);
GraphDataset binomial_tree(int order);
GraphDataset balanced_tree(int branching, int height);
GraphDataset grid_2d(int rows, int cols);
GraphDataset hypercube(int dim);
GraphDataset complete_bipartite(int a, int b);
GraphDataset turan(int n, int parts);
GraphDataset windmill(int cliques, int clique_size);

/// Cubic graph from LCF notation on a Hamiltonian cycle of n nodes.
GraphDataset lcf(std::string name, int n, const std::vector<int>& shifts, int repeats);

/// Names of the 37 GPR instances, in dataset order.
const std::vector<std::string>& instance_names();

/// Constructs one GPR instance by name (e.g. "lollipop_graph"); throws NotFound.
GraphDataset classic_graph(std::string_view name);

/// The full GPR graph instance set.
GraphInstanceSet make_dataset();

}  // namespace gtr::gpr
