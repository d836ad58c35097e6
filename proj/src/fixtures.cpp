#include "gtr/fixtures.hpp"

#include <array>
#include <set>

#include "gtr/gpr.hpp"
#include "gtr/recsys.hpp"
#include "gtr/rng.hpp"

namespace gtr::fixtures {

namespace {

GraphDataset finish(DataProfile p, std::vector<NodeRecord> nodes, std::vector<LinkRecord> links) {
  p.order = nodes.size();
  p.size = links.size();
  return GraphDataset(std::move(p), std::move(nodes), std::move(links));
}

LinkRecord link(std::string u, std::string v) { return {std::move(u), std::move(v), std::nullopt, std::nullopt, std::nullopt}; }

}  // namespace

GraphDataset cora() {
  const std::vector<std::pair<std::string, std::vector<std::string>>> clusters = {
      {"Neural Networks", {"1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "83826"}},
      {"Theory", {"11", "12", "13", "14", "15", "16", "17", "18", "19", "20"}},
      {"Genetic Algorithms", {"21", "22", "23", "24", "25", "26", "27", "28", "29", "30"}},
  };
  const std::vector<std::string> held = {"1", "4", "12", "16", "23", "28", "83826"};
  Rng rng(2708);
  std::vector<NodeRecord> nodes;
  std::vector<LinkRecord> links;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& [topic, ids] = clusters[c];
    for (const auto& id : ids) {
      std::vector<double> features(8, 0.0);
      for (int k = 0; k < 8; ++k) {
        // words of the paper's own topic are more frequent
        double p = (k / 3 == static_cast<int>(c)) ? 0.7 : 0.15;
        features[k] = rng.unit() < p ? 1.0 : 0.0;
      }
      nodes.push_back({id, features, topic});
    }
    const auto n = ids.size();
    for (std::size_t i = 0; i < n; ++i) {
      links.push_back(link(ids[i], ids[(i + 1) % n]));
      links.push_back(link(ids[i], ids[(i + 2) % n]));
    }
  }
  links.push_back(link("5", "15"));
  links.push_back(link("18", "27"));
  links.push_back(link("30", "3"));

  DataProfile p;
  p.name = "cora";
  p.extras["feature_dim"] = 8;
  p.extras["class_count"] = 3;
  p.extras["test_idx"] = held;
  return finish(std::move(p), std::move(nodes), std::move(links));
}

GraphDataset twitter() {
  const std::vector<std::vector<std::string>> groups = {
      {"deeprogress", "alejandro1254", "iancr", "marta_lopez", "jkwon", "sunny_days", "b0bcat", "tech_ana"},
      {"ClassyIndeed", "user/9674821", "ljaniszewski8", "victorcarbonero", "user/11979222", "sparkey215",
       "random_user", "nadia_r"},
      {"user/1265481", "qbit", "okafor_e", "lena.m", "paulo_s", "wren", "hikari", "d_ostrowski"},
  };
  std::vector<NodeRecord> nodes;
  std::vector<LinkRecord> links;
  for (const auto& g : groups) {
    for (const auto& id : g) nodes.push_back({id, std::nullopt, std::nullopt});
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        if (j - i != 4) links.push_back(link(g[i], g[j]));
      }
    }
  }
  links.push_back(link("tech_ana", "ClassyIndeed"));
  links.push_back(link("nadia_r", "user/1265481"));
  links.push_back(link("d_ostrowski", "deeprogress"));

  DataProfile p;
  p.name = "twitter";
  p.extras["kmeans_k"] = 3;
  return finish(std::move(p), std::move(nodes), std::move(links));
}

GraphDataset movielens() {
  auto g = recsys::planted_blocks(20, 20, 2, 7);
  DataProfile p = g.profile;
  p.name = "movielens";
  return GraphDataset(std::move(p), g.nodes(), g.links());
}

GraphDataset wordnet() {
  const std::vector<std::array<std::string, 3>> triples = {
      {"doll.n.01", "_hypernym", "plaything.n.01"},
      {"ball.n.01", "_hypernym", "plaything.n.01"},
      {"kite.n.03", "_hypernym", "plaything.n.01"},
      {"plaything.n.01", "_hypernym", "artifact.n.01"},
      {"swing.n.02", "_hypernym", "mechanical_device.n.01"},
      {"mechanical_device.n.01", "_hypernym", "artifact.n.01"},
      {"swing.n.02", "_has_part", "seat.n.03"},
      {"swing.n.02", "_has_part", "rope.n.01"},
      {"kite.n.03", "_has_part", "string.n.01"},
      {"doll.n.01", "_has_part", "head.n.04"},
      {"chair.n.01", "_hypernym", "seat.n.03"},
      {"seat.n.03", "_hypernym", "artifact.n.01"},
      {"rope.n.01", "_hypernym", "line.n.18"},
      {"string.n.01", "_hypernym", "line.n.18"},
      {"line.n.18", "_hypernym", "artifact.n.01"},
  };
  std::vector<NodeRecord> nodes;
  std::set<std::string> seen;
  std::vector<LinkRecord> links;
  for (const auto& [h, r, t] : triples) {
    for (const auto& e : {h, t}) {
      if (seen.insert(e).second) nodes.push_back({e, std::nullopt, std::nullopt});
    }
    links.push_back({h, t, std::nullopt, std::nullopt, r});
  }
  DataProfile p;
  p.name = "wordnet";
  p.is_directed = true;
  p.extras["relation_count"] = 2;
  return finish(std::move(p), std::move(nodes), std::move(links));
}

GraphInstanceSet mutag() {
  auto ring = [](const std::string& id, int ring_size, int tail, int fused) {
    std::vector<gpr::Edge> edges;
    for (int i = 0; i < ring_size; ++i) edges.emplace_back(i, (i + 1) % ring_size);
    int next = ring_size;
    if (fused > 0) {
      // second ring sharing the edge (0, 1)
      int prev = 1;
      for (int k = 0; k < fused; ++k) {
        edges.emplace_back(prev, next);
        prev = next++;
      }
      edges.emplace_back(prev, 0);
    }
    int prev = 2;
    for (int k = 0; k < tail; ++k) {
      edges.emplace_back(prev, next);
      prev = next++;
    }
    auto g = gpr::from_edges(id, next, edges);
    return GraphInstance{id, g.nodes(), g.links(), std::string("mutagenic")};
  };
  auto chain = [](const std::string& id, int length, int branch) {
    std::vector<gpr::Edge> edges;
    for (int i = 0; i + 1 < length; ++i) edges.emplace_back(i, i + 1);
    int next = length;
    for (int b = 0; b < branch; ++b) edges.emplace_back(1 + 2 * b, next++);
    auto g = gpr::from_edges(id, next, edges);
    return GraphInstance{id, g.nodes(), g.links(), std::string("non-mutagenic")};
  };
  std::vector<GraphInstance> graphs = {
      ring("1", 6, 0, 0),  ring("2", 6, 1, 0), ring("3", 6, 2, 0),   ring("4", 6, 1, 4),
      ring("5", 6, 2, 4),  ring("6", 5, 1, 0), chain("7", 6, 0),     chain("8", 8, 1),
      chain("9", 7, 2),    chain("10", 9, 0),  chain("11", 8, 2),    chain("12", 5, 1),
  };
  DataProfile p;
  p.name = "mutag";
  p.extras["graph_number"] = graphs.size();
  p.extras["class_count"] = 2;
  p.extras["test_idx"] = std::vector<std::string>{"5", "11"};
  return GraphInstanceSet(std::move(p), std::move(graphs));
}

std::vector<std::pair<std::string, Dataset>> all() {
  return {
      {"gpr", gpr::make_dataset()},   {"cora", cora()},         {"twitter", twitter()},
      {"movielens", movielens()},     {"wordnet", wordnet()},   {"mutag", mutag()},
  };
}

}  // namespace gtr::fixtures
