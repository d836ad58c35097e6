#include <chrono>
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

int block_of(const std::string& id) { return std::stoi(id.substr(1)) / 10; }

// AUC by comparing the held-out item against every unseen item, per user.
double exhaustive_auc(const recsys::BprModel& m, const std::vector<std::pair<std::string, std::string>>& holdout) {
  double sum = 0;
  int users = 0;
  for (const auto& [u, pos] : holdout) {
    const auto& seen = m.history.at(u);
    double hits = 0;
    int total = 0;
    for (const auto& item : m.items.ids()) {
      if (item == pos || seen.count(item)) continue;
      double a = m.score(u, pos), b = m.score(u, item);
      hits += a > b ? 1 : (a == b ? 0.5 : 0);
      ++total;
    }
    if (total) {
      sum += hits / total;
      ++users;
    }
  }
  return sum / users;
}

struct Planted {
  GraphDataset graph = recsys::planted_blocks(20, 20, 2, 7);
  recsys::InteractionData data = recsys::split_interactions(graph);
  recsys::BprModel model = recsys::train_bpr(data, recsys::BprHyper{});
};

const Planted& planted() {
  static Planted p;
  return p;
}

}  // namespace

TEST_CASE("planted block layout") {
  const auto& p = planted();
  CHECK(p.data.users.size() == 20);
  CHECK(p.data.items.size() == 20);
  CHECK(p.data.holdout.size() == 20);
  for (const auto& [u, seen] : p.data.history) {
    CHECK(seen.size() == 9);
    for (const auto& i : seen) CHECK(block_of(i) == block_of(u));
  }
  // the held-out item is the user's latest interaction
  for (const auto& [u, item] : p.data.holdout) {
    std::int64_t latest = -1;
    std::string latest_item;
    for (const auto& l : p.graph.links()) {
      if (l.source == u && *l.timestamp > latest) {
        latest = *l.timestamp;
        latest_item = l.target;
      }
    }
    CHECK(item == latest_item);
  }
}

TEST_CASE("held-out AUC on the planted dataset") {
  auto start = std::chrono::steady_clock::now();
  auto model = recsys::train_bpr(planted().data, recsys::BprHyper{});
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 10.0);
  double auc = exhaustive_auc(model, planted().data.holdout);
  CHECK(auc >= 0.9);
  CHECK(recsys::holdout_auc(model, planted().data.holdout) == doctest::Approx(auc));
}

TEST_CASE("training loss is non-increasing across epochs") {
  const auto& loss = planted().model.epoch_loss;
  REQUIRE(loss.size() == 51);
  for (std::size_t e = 1; e < loss.size(); ++e) {
    CAPTURE(e);
    CHECK(loss[e] <= loss[e - 1] + 1e-6);
  }
  CHECK(loss.front() == doctest::Approx(std::log(2.0)).epsilon(1e-3));
  CHECK(loss.back() < loss.front());
}

TEST_CASE("triplet gradient matches central finite differences") {
  std::mt19937 rng(1);
  std::normal_distribution<double> normal(0.0, 0.5);
  const double h = 1e-6;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 8;
    std::vector<double> u(d), i(d), j(d);
    for (auto* v : {&u, &i, &j})
      for (auto& x : *v) x = normal(rng);
    const double l2 = 0.01;
    auto g = recsys::bpr_triplet(u, i, j, l2);
    auto check = [&](std::vector<double>& v, const std::vector<double>& grad) {
      for (std::size_t k = 0; k < d; ++k) {
        const double keep = v[k];
        v[k] = keep + h;
        double up = recsys::bpr_triplet(u, i, j, l2).loss;
        v[k] = keep - h;
        double down = recsys::bpr_triplet(u, i, j, l2).loss;
        v[k] = keep;
        double fd = (up - down) / (2 * h);
        double rel = std::fabs(fd - grad[k]) / std::max({std::fabs(fd), std::fabs(grad[k]), 1e-8});
        worst = std::max(worst, rel);
      }
    };
    check(u, g.du);
    check(i, g.di);
    check(j, g.dj);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("zero epochs keep the initialization") {
  recsys::BprHyper h;
  h.epochs = 0;
  auto a = recsys::train_bpr(planted().data, h);
  auto b = recsys::train_bpr(planted().data, h);
  CHECK(a.users == b.users);
  CHECK(a.items == b.items);
  auto init = EmbeddingTable::uniform(planted().data.users, h.dim, -0.01, 0.01, h.seed);
  CHECK(a.users == init);
}

TEST_CASE("training is deterministic given the seed") {
  auto a = recsys::train_bpr(planted().data, recsys::BprHyper{});
  CHECK(a.users == planted().model.users);
  CHECK(a.items == planted().model.items);
  CHECK(a.epoch_loss == planted().model.epoch_loss);
}

TEST_CASE("recommendation scores and ordering") {
  const auto& m = planted().model;
  double in_block = recsys::recommendation(m, "u0", "i5");
  double cross = recsys::recommendation(m, "u0", "i15");
  CHECK(in_block > cross);
  CHECK(in_block > 0.0);
  CHECK(in_block < 1.0);

  auto top1 = recsys::topk_recommendation(m, "u3", 1);
  REQUIRE(top1.size() == 1);
  CHECK(block_of(top1[0].first) == 0);
  CHECK_FALSE(m.history.at("u3").count(top1[0].first));

  auto all = recsys::topk_recommendation(m, "u3", 100);
  CHECK(all.size() == 20 - m.history.at("u3").size());
  for (std::size_t k = 1; k < all.size(); ++k) CHECK(all[k].second <= all[k - 1].second);
  // every returned item outranks every excluded unseen item
  auto top5 = recsys::topk_recommendation(m, "u3", 5);
  for (std::size_t k = 5; k < all.size(); ++k) CHECK(all[k].second <= top5.back().second);
}

TEST_CASE("sigmoid symmetry and zero embeddings") {
  for (double x : {-3.0, -0.2, 0.0, 0.7, 5.0}) {
    CHECK(recsys::sigmoid(x) + recsys::sigmoid(-x) == doctest::Approx(1.0));
  }
  CHECK(recsys::sigmoid(0.0) == 0.5);
  auto m = planted().model;
  for (std::size_t r = 0; r < m.users.rows(); ++r)
    for (auto& x : m.users.row(r)) x = 0.0;
  CHECK(recsys::recommendation(m, "u0", "i0") == 0.5);
}

TEST_CASE("recsys errors") {
  const auto& m = planted().model;
  CHECK(code_of([&] { recsys::recommendation(m, "nobody", "i0"); }) == ErrorCode::UnknownUser);
  CHECK(code_of([&] { recsys::recommendation(m, "u0", "nothing"); }) == ErrorCode::UnknownItem);
  CHECK(code_of([&] { recsys::topk_recommendation(m, "u0", 0); }) == ErrorCode::BadK);
  CHECK(code_of([&] { recsys::topk_recommendation(m, "nobody", 1); }) == ErrorCode::UnknownUser);

  DataProfile p;
  p.name = "chain";
  p.is_directed = true;
  p.order = 3;
  p.size = 2;
  GraphDataset chain(p, {{"a", {}, {}}, {"b", {}, {}}, {"c", {}, {}}}, {{"a", "b", {}, 1, {}}, {"b", "c", {}, 2, {}}});
  CHECK(code_of([&] { recsys::split_interactions(chain); }) == ErrorCode::NotBipartite);

  p.order = 2;
  p.size = 1;
  GraphDataset single(p, {{"a", {}, {}}, {"b", {}, {}}}, {{"a", "b", {}, 1, {}}});
  CHECK(code_of([&] { recsys::train_bpr(single, recsys::BprHyper{}); }) == ErrorCode::EmptyTraining);
}

TEST_CASE("model json round trip") {
  const auto& m = planted().model;
  auto back = recsys::BprModel::from_json(m.to_json());
  CHECK(back.users == m.users);
  CHECK(back.items == m.items);
  CHECK(back.history == m.history);
  CHECK(back.hyper.dim == m.hyper.dim);
  CHECK(recsys::recommendation(back, "u1", "i2") == recsys::recommendation(m, "u1", "i2"));
}
