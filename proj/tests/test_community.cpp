#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace gtr;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Malformed;
}

std::vector<gpr::Edge> random_edges(int n, double p, std::mt19937& rng) {
  std::vector<gpr::Edge> edges;
  std::bernoulli_distribution coin(p);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  return edges;
}

}  // namespace

TEST_CASE("two disjoint triangles split into their triangles") {
  auto g = testing::undirected(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  for (std::uint64_t seed : {1ull, 42ull, 2024ull}) {
    auto a = community::fit_communities(g, 2, seed);
    CHECK(community::community_count(a) == 2);
    CHECK(a.label_of("0") == a.label_of("1"));
    CHECK(a.label_of("1") == a.label_of("2"));
    CHECK(a.label_of("3") == a.label_of("4"));
    CHECK(a.label_of("4") == a.label_of("5"));
    CHECK(a.label_of("0") != a.label_of("3"));
    CHECK(a.label_of("0") == 0);  // numbered by first appearance
    CHECK(community::community_size(a, "4") == 3);
    CHECK(community::community_avg_size(a) == doctest::Approx(3.0));
    CHECK(community::community_max_size(a) == 3);
    CHECK(community::common_community_check(a, "0", "2"));
    CHECK_FALSE(community::common_community_check(a, "2", "3"));
  }
}

TEST_CASE("common neighbor matrix counts shared neighbors") {
  auto g = testing::undirected(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  std::vector<NodeId> order;
  auto m = community::common_neighbor_matrix(g, &order);
  CHECK(order == std::vector<NodeId>{"0", "1", "2", "3"});
  CHECK(m[0][1] == 1);  // node 2
  CHECK(m[0][3] == 1);  // node 2
  CHECK(m[1][2] == 1);  // node 0
  CHECK(m[2][3] == 0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m[i][j] == m[j][i]);
}

TEST_CASE("default k") {
  CHECK(community::default_k(0) == 1);
  CHECK(community::default_k(2) == 1);
  CHECK(community::default_k(8) == 2);
  CHECK(community::default_k(9) == 3);
  CHECK(community::default_k(24) == 4);
}

TEST_CASE("common_community_check is an equivalence relation on random graphs") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 12)(rng);
    auto g = testing::undirected(n, random_edges(n, 0.35, rng));
    auto a = community::fit_communities(g, std::nullopt, trial);
    std::vector<NodeId> ids;
    for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    CAPTURE(trial);
    for (const auto& x : ids) {
      CHECK(community::common_community_check(a, x, x));
      for (const auto& y : ids) {
        bool xy = community::common_community_check(a, x, y);
        CHECK(xy == community::common_community_check(a, y, x));
        CHECK(xy == (community::community(a, x) == community::community(a, y)));
        for (const auto& z : ids) {
          if (xy && community::common_community_check(a, y, z)) CHECK(community::common_community_check(a, x, z));
        }
      }
    }
    std::size_t total = 0;
    for (auto s : a.sizes()) {
      CHECK(s > 0);
      total += s;
    }
    CHECK(total == static_cast<std::size_t>(n));
    CHECK(community::community_count(a) == std::min(community::default_k(n), n));
  }
}

TEST_CASE("kmeans ends at a Lloyd fixed point with exactly k clusters") {
  std::mt19937 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = std::uniform_int_distribution<int>(3, 30)(rng);
    int k = std::uniform_int_distribution<int>(1, std::min(n, 5))(rng);
    std::vector<std::vector<double>> pts(n, std::vector<double>(3));
    for (auto& p : pts)
      for (auto& x : p) x = noise(rng);
    auto labels = community::kmeans(pts, k, trial);
    REQUIRE(labels.size() == pts.size());
    std::vector<std::vector<double>> mean(k, std::vector<double>(3, 0.0));
    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i) {
      REQUIRE(labels[i] >= 0);
      REQUIRE(labels[i] < k);
      ++count[labels[i]];
      for (int d = 0; d < 3; ++d) mean[labels[i]][d] += pts[i][d];
    }
    for (int c = 0; c < k; ++c) {
      CHECK(count[c] > 0);
      for (auto& x : mean[c]) x /= std::max(count[c], 1);
    }
    auto sq = [](const std::vector<double>& a, const std::vector<double>& b) {
      double s = 0;
      for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
      return s;
    };
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) CHECK(sq(pts[i], mean[labels[i]]) <= sq(pts[i], mean[c]) + 1e-6);
    }
  }
}

TEST_CASE("assignment does not depend on node insertion order") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 12)(rng);
    auto edges = random_edges(n, 0.4, rng);
    auto g = testing::undirected(n, edges);
    auto shuffled_nodes = g.nodes();
    auto shuffled_links = g.links();
    std::shuffle(shuffled_nodes.begin(), shuffled_nodes.end(), rng);
    std::shuffle(shuffled_links.begin(), shuffled_links.end(), rng);
    GraphDataset h(g.profile, shuffled_nodes, shuffled_links);
    CHECK(community::fit_communities(g, std::nullopt, 9).labels() ==
          community::fit_communities(h, std::nullopt, 9).labels());
  }
}

TEST_CASE("community errors") {
  auto g = testing::undirected(3, {{0, 1}});
  CHECK(code_of([&] { community::fit_communities(g, 0, 1); }) == ErrorCode::BadK);
  CHECK(code_of([&] { community::fit_communities(g, 4, 1); }) == ErrorCode::BadK);
  auto a = community::fit_communities(g, 1, 1);
  CHECK(code_of([&] { community::community(a, "7"); }) == ErrorCode::UnknownNode);
  auto empty = testing::undirected(0, {});
  CHECK(code_of([&] { community::fit_communities(empty, std::nullopt, 1); }) == ErrorCode::EmptyGraph);
}
