#include "gtr/gpr.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace gtr::gpr {

GraphDataset from_edges(std::string name, int n, const std::vector<Edge>& edges) {
  std::vector<NodeRecord> nodes;
  nodes.reserve(n);
  for (int i = 0; i < n; ++i) nodes.push_back(NodeRecord{std::to_string(i), {}, {}});
  std::set<Edge> seen;
  std::vector<LinkRecord> links;
  for (auto [u, v] : edges) {
    if (u == v) continue;
    Edge key{std::min(u, v), std::max(u, v)};
    if (!seen.insert(key).second) continue;
    links.push_back(LinkRecord{std::to_string(key.first), std::to_string(key.second), {}, {}, {}});
  }
  DataProfile p;
  p.name = std::move(name);
  p.order = nodes.size();
  p.size = links.size();
  return GraphDataset(std::move(p), std::move(nodes), std::move(links));
}

namespace {

void add_clique(std::vector<Edge>& edges, const std::vector<int>& members) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) edges.emplace_back(members[i], members[j]);
  }
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int i = lo; i < hi; ++i) out.push_back(i);
  return out;
}

}  // namespace

GraphDataset lollipop(int clique, int tail) {
  std::vector<Edge> e;
  add_clique(e, range(0, clique));
  for (int i = clique - 1; i < clique + tail - 1; ++i) e.emplace_back(i, i + 1);
  return from_edges("lollipop_graph", clique + tail, e);
}

GraphDataset barbell(int bell, int bridge) {
  std::vector<Edge> e;
  add_clique(e, range(0, bell));
  for (int i = bell - 1; i < bell + bridge; ++i) e.emplace_back(i, i + 1);
  add_clique(e, range(bell + bridge, 2 * bell + bridge));
  return from_edges("barbell_graph", 2 * bell + bridge, e);
}

GraphDataset path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return from_edges("path_graph", n, e);
}

GraphDataset cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return from_edges("cycle_graph", n, e);
}

GraphDataset complete(int n) {
  std::vector<Edge> e;
  add_clique(e, range(0, n));
  return from_edges("complete_graph", n, e);
}

GraphDataset star(int leaves) {
  std::vector<Edge> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return from_edges("star_graph", leaves + 1, e);
}

GraphDataset wheel(int n) {
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  for (int i = 1; i < n; ++i) e.emplace_back(i, i == n - 1 ? 1 : i + 1);
  return from_edges("wheel_graph", n, e);
}

GraphDataset ladder(int rungs) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < rungs; ++i) {
    e.emplace_back(i, i + 1);
    e.emplace_back(rungs + i, rungs + i + 1);
  }
  for (int i = 0; i < rungs; ++i) e.emplace_back(i, rungs + i);
  return from_edges("ladder_graph", 2 * rungs, e);
}

GraphDataset circular_ladder(int rungs) {
  std::vector<Edge> e;
  for (int i = 0; i < rungs; ++i) {
    e.emplace_back(i, (i + 1) % rungs);
    e.emplace_back(rungs + i, rungs + (i + 1) % rungs);
    e.emplace_back(i, rungs + i);
  }
  return from_edges("circular_ladder_graph", 2 * rungs, e);
}

GraphDataset binomial_tree(int order) {
  std::vector<Edge> e;
  int n = 1;
  for (int i = 0; i < order; ++i) {
    std::size_t existing = e.size();
    for (std::size_t k = 0; k < existing; ++k) e.emplace_back(e[k].first + n, e[k].second + n);
    e.emplace_back(0, n);
    n *= 2;
  }
  return from_edges("binomial_tree", n, e);
}

GraphDataset balanced_tree(int branching, int height) {
  int n = 1;
  int level = 1;
  for (int h = 0; h < height; ++h) {
    level *= branching;
    n += level;
  }
  std::vector<Edge> e;
  for (int child = 1; child < n; ++child) e.emplace_back((child - 1) / branching, child);
  return from_edges("balanced_tree", n, e);
}

GraphDataset grid_2d(int rows, int cols) {
  std::vector<Edge> e;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
      if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
    }
  }
  return from_edges("grid_2d_graph", rows * cols, e);
}

GraphDataset hypercube(int dim) {
  int n = 1 << dim;
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u) {
    for (int b = 0; b < dim; ++b) {
      int v = u ^ (1 << b);
      if (u < v) e.emplace_back(u, v);
    }
  }
  return from_edges("hypercube_graph", n, e);
}

GraphDataset complete_bipartite(int a, int b) {
  std::vector<Edge> e;
  for (int i = 0; i < a; ++i) {
    for (int j = a; j < a + b; ++j) e.emplace_back(i, j);
  }
  return from_edges("complete_bipartite_graph", a + b, e);
}

GraphDataset turan(int n, int parts) {
  std::vector<int> sizes(parts - n % parts, n / parts);
  sizes.insert(sizes.end(), n % parts, n / parts + 1);
  std::vector<int> part_of;
  for (int p = 0; p < parts; ++p) part_of.insert(part_of.end(), sizes[p], p);
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (part_of[u] != part_of[v]) e.emplace_back(u, v);
    }
  }
  return from_edges("turan_graph", n, e);
}

GraphDataset windmill(int cliques, int clique_size) {
  std::vector<Edge> e;
  int next = 1;
  for (int c = 0; c < cliques; ++c) {
    std::vector<int> members{0};
    for (int k = 1; k < clique_size; ++k) members.push_back(next++);
    add_clique(e, members);
  }
  return from_edges("windmill_graph", next, e);
}

GraphDataset lcf(std::string name, int n, const std::vector<int>& shifts, int repeats) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  int extra = repeats * static_cast<int>(shifts.size());
  for (int i = 0; i < extra; ++i) {
    int shift = shifts[i % shifts.size()];
    int u = i % n;
    int v = ((i + shift) % n + n) % n;
    e.emplace_back(u, v);
  }
  return from_edges(std::move(name), n, e);
}

namespace {

using Maker = std::function<GraphDataset()>;

GraphDataset named(std::string name, int n, std::vector<Edge> edges) {
  return from_edges(std::move(name), n, edges);
}

GraphDataset rename(GraphDataset g, const std::string& name) {
  g.profile.name = name;
  return g;
}

const std::vector<std::pair<std::string, Maker>>& catalog() {
  static const std::vector<std::pair<std::string, Maker>> makers = {
      {"lollipop_graph", [] { return lollipop(4, 6); }},
      {"barbell_graph", [] { return barbell(5, 2); }},
      {"wheel_graph", [] { return wheel(6); }},
      {"star_graph", [] { return star(6); }},
      {"path_graph", [] { return path(12); }},
      {"cycle_graph", [] { return cycle(10); }},
      {"complete_graph", [] { return complete(8); }},
      {"ladder_graph", [] { return ladder(5); }},
      {"circular_ladder_graph", [] { return circular_ladder(6); }},
      {"binomial_tree", [] { return binomial_tree(4); }},
      {"balanced_tree", [] { return balanced_tree(2, 3); }},
      {"grid_2d_graph", [] { return grid_2d(3, 4); }},
      {"hypercube_graph", [] { return hypercube(4); }},
      {"complete_bipartite_graph", [] { return complete_bipartite(3, 4); }},
      {"turan_graph", [] { return turan(10, 3); }},
      {"windmill_graph", [] { return windmill(3, 4); }},
      {"tutte_graph",
       [] {
         return named("tutte_graph", 46,
                      {{0, 1},   {0, 2},   {0, 3},   {1, 4},   {1, 26},  {2, 10},  {2, 11},  {3, 18},
                       {3, 19},  {4, 5},   {4, 33},  {5, 6},   {5, 29},  {6, 7},   {6, 27},  {7, 8},
                       {7, 14},  {8, 9},   {8, 38},  {9, 10},  {9, 37},  {10, 39}, {11, 12}, {11, 39},
                       {12, 13}, {12, 35}, {13, 14}, {13, 15}, {14, 34}, {15, 16}, {15, 22}, {16, 17},
                       {16, 44}, {17, 18}, {17, 43}, {18, 45}, {19, 20}, {19, 45}, {20, 21}, {20, 41},
                       {21, 22}, {21, 23}, {22, 40}, {23, 24}, {23, 27}, {24, 25}, {24, 32}, {25, 26},
                       {25, 31}, {26, 33}, {27, 28}, {28, 29}, {28, 32}, {29, 30}, {30, 31}, {30, 33},
                       {31, 32}, {34, 35}, {34, 38}, {35, 36}, {36, 37}, {36, 39}, {37, 38}, {40, 41},
                       {40, 44}, {41, 42}, {42, 43}, {42, 45}, {43, 44}});
       }},
      {"bull_graph", [] { return named("bull_graph", 5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}}); }},
      {"chvatal_graph",
       [] {
         return named("chvatal_graph", 12,
                      {{0, 1}, {0, 4}, {0, 6}, {0, 9}, {1, 2}, {1, 5}, {1, 7}, {2, 3},
                       {2, 6}, {2, 8}, {3, 4}, {3, 7}, {3, 9}, {4, 5}, {4, 8}, {5, 10},
                       {5, 11}, {6, 10}, {6, 11}, {7, 8}, {7, 11}, {8, 10}, {9, 10}, {9, 11}});
       }},
      {"cubical_graph",
       [] {
         return named("cubical_graph", 8,
                      {{0, 1}, {0, 3}, {0, 4}, {1, 2}, {1, 7}, {2, 3}, {2, 6}, {3, 5},
                       {4, 5}, {4, 7}, {5, 6}, {6, 7}});
       }},
      {"desargues_graph", [] { return lcf("desargues_graph", 20, {5, -5, 9, -9}, 5); }},
      {"diamond_graph", [] { return named("diamond_graph", 4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}); }},
      {"dodecahedral_graph",
       [] { return lcf("dodecahedral_graph", 20, {10, 7, 4, -4, -7, 10, -4, 7, -7, 4}, 2); }},
      {"frucht_graph",
       [] {
         return named("frucht_graph", 12,
                      {{0, 1}, {0, 6}, {0, 7}, {1, 2}, {1, 7}, {2, 3}, {2, 8}, {3, 4}, {3, 9},
                       {4, 5}, {4, 9}, {5, 6}, {5, 10}, {6, 10}, {7, 11}, {8, 9}, {8, 11}, {10, 11}});
       }},
      {"heawood_graph", [] { return lcf("heawood_graph", 14, {5, -5}, 7); }},
      {"house_graph",
       [] { return named("house_graph", 5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}); }},
      {"house_x_graph",
       [] {
         return named("house_x_graph", 5,
                      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}});
       }},
      {"icosahedral_graph",
       [] {
         return named("icosahedral_graph", 12,
                      {{0, 1},  {0, 5},  {0, 7},  {0, 8},  {0, 11}, {1, 2},  {1, 5},  {1, 6},
                       {1, 8},  {2, 3},  {2, 6},  {2, 8},  {2, 9},  {3, 4},  {3, 6},  {3, 9},
                       {3, 10}, {4, 5},  {4, 6},  {4, 10}, {4, 11}, {5, 6},  {5, 11}, {7, 8},
                       {7, 9},  {7, 10}, {7, 11}, {8, 9},  {9, 10}, {10, 11}});
       }},
      {"krackhardt_kite_graph",
       [] {
         return named("krackhardt_kite_graph", 10,
                      {{0, 1}, {0, 2}, {0, 3}, {0, 5}, {1, 3}, {1, 4}, {1, 6}, {2, 3}, {2, 5},
                       {3, 4}, {3, 5}, {3, 6}, {4, 6}, {5, 6}, {5, 7}, {6, 7}, {7, 8}, {8, 9}});
       }},
      {"moebius_kantor_graph", [] { return lcf("moebius_kantor_graph", 16, {5, -5}, 8); }},
      {"octahedral_graph",
       [] {
         return named("octahedral_graph", 6,
                      {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 5}, {2, 4},
                       {2, 5}, {3, 4}, {3, 5}, {4, 5}});
       }},
      {"pappus_graph", [] { return lcf("pappus_graph", 18, {5, 7, -7, 7, -7, -5}, 3); }},
      {"petersen_graph",
       [] {
         return named("petersen_graph", 10,
                      {{0, 1}, {0, 4}, {0, 5}, {1, 2}, {1, 6}, {2, 3}, {2, 7}, {3, 4},
                       {3, 8}, {4, 9}, {5, 7}, {5, 8}, {6, 8}, {6, 9}, {7, 9}});
       }},
      {"sedgewick_maze_graph",
       [] {
         return named("sedgewick_maze_graph", 8,
                      {{0, 2}, {0, 5}, {0, 7}, {1, 7}, {2, 6}, {3, 4}, {3, 5}, {4, 5}, {4, 6}, {4, 7}});
       }},
      {"tetrahedral_graph", [] { return rename(complete(4), "tetrahedral_graph"); }},
      {"truncated_cube_graph",
       [] {
         return named("truncated_cube_graph", 24,
                      {{0, 1},   {0, 2},   {0, 4},   {1, 11},  {1, 14},  {2, 3},   {2, 4},   {3, 6},
                       {3, 8},   {4, 5},   {5, 16},  {5, 18},  {6, 7},   {6, 8},   {7, 10},  {7, 12},
                       {8, 9},   {9, 17},  {9, 20},  {10, 11}, {10, 12}, {11, 14}, {12, 13}, {13, 21},
                       {13, 22}, {14, 15}, {15, 19}, {15, 23}, {16, 17}, {16, 18}, {17, 20}, {18, 19},
                       {19, 23}, {20, 21}, {21, 22}, {22, 23}});
       }},
      {"truncated_tetrahedron_graph",
       [] {
         return named("truncated_tetrahedron_graph", 12,
                      {{0, 1}, {0, 2}, {0, 9}, {1, 2}, {1, 6}, {2, 3}, {3, 4}, {3, 11}, {4, 5},
                       {4, 11}, {5, 6}, {5, 7}, {6, 7}, {7, 8}, {8, 9}, {8, 10}, {9, 10}, {10, 11}});
       }},
  };
  return makers;
}

}  // namespace

const std::vector<std::string>& instance_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, make] : catalog()) out.push_back(name);
    return out;
  }();
  return names;
}

GraphDataset classic_graph(std::string_view name) {
  for (const auto& [n, make] : catalog()) {
    if (n == name) return rename(make(), n);
  }
  throw Error(ErrorCode::NotFound, "unknown classic graph '" + std::string(name) + "'");
}

GraphInstanceSet make_dataset() {
  std::vector<GraphInstance> graphs;
  for (const auto& [name, make] : catalog()) {
    GraphDataset g = make();
    graphs.push_back(GraphInstance{name, g.nodes(), g.links(), std::nullopt});
  }
  DataProfile p;
  p.name = "gpr";
  p.extras["graph_number"] = graphs.size();
  return GraphInstanceSet(std::move(p), std::move(graphs));
}

}  // namespace gtr::gpr
