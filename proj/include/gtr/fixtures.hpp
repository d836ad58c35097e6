#pragma once

// Small shipped datasets, one per dataset family. Built deterministically so
// the files under data/ can be regenerated byte-for-byte.

#include <string>
#include <utility>
#include <vector>

#include "gtr/graph_store.hpp"

namespace gtr::fixtures {

/// Bibliographic excerpt: 31 papers in three topic clusters, 8-dim features,
/// test_idx masks 7 papers (including paper 1) from the classifiers.
GraphDataset cora();

/// Undirected follower graph: 24 users in three planted groups.
GraphDataset twitter();

/// 20 users × 20 items, two interaction blocks, timestamped.
GraphDataset movielens();

/// WordNet-style triples over synset ids.
GraphDataset wordnet();

/// 12 molecule-like instances: ring systems ("mutagenic") vs chains.
GraphInstanceSet mutag();

/// Every shipped dataset as (registry name, dataset).
std::vector<std::pair<std::string, Dataset>> all();

}  // namespace gtr::fixtures
