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

const std::vector<kg::Triple> kToy = {{"A", "likes", "B"}, {"C", "likes", "D"}};

// Tail rank by scoring every candidate, skipping other known true tails.
double exhaustive_hits1(const kg::KgModel& m, const std::vector<kg::Triple>& test) {
  int hits = 0;
  for (const auto& t : test) {
    auto h = m.entities.row(m.entities.find(t.head));
    auto r = m.relations.row(m.relations.find(t.relation));
    double truth = kg::distance(h, r, m.entities.row(m.entities.find(t.tail)));
    int better = 0;
    for (const auto& cand : m.entities.ids()) {
      if (cand == t.tail) continue;
      bool known = false;
      for (const auto& k : m.triples) known |= k.head == t.head && k.relation == t.relation && k.tail == cand;
      if (known) continue;
      if (kg::distance(h, r, m.entities.row(m.entities.find(cand))) < truth) ++better;
    }
    hits += better == 0;
  }
  return static_cast<double>(hits) / test.size();
}

}  // namespace

TEST_CASE("toy knowledge graph is separated after training") {
  auto start = std::chrono::steady_clock::now();
  int epochs_seen = 0;
  double worst = 0;
  auto m = kg::train_transe({"A", "B", "C", "D"}, kToy, kg::TransEHyper{}, [&](const kg::KgModel& model, int) {
    ++epochs_seen;
    for (std::size_t i = 0; i < model.entities.rows(); ++i) {
      worst = std::max(worst, std::fabs(l2_norm(model.entities.row(i)) - 1.0));
    }
  });
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 5.0);
  CHECK(epochs_seen == kg::TransEHyper{}.epochs);
  CHECK(worst <= 1e-6);

  auto row = [&](const std::string& e) { return m.entities.row(m.entities.find(e)); };
  auto likes = m.relations.row(m.relations.find("likes"));
  CHECK(kg::distance(row("A"), likes, row("B")) < kg::distance(row("A"), likes, row("C")));
  CHECK(exhaustive_hits1(m, kToy) == 1.0);
  CHECK(kg::filtered_hits_at(m, kToy, 1) == 1.0);
  CHECK(kg::search_tail_entity(m, "A", "likes") == "B");
  CHECK(kg::search_tail_entity(m, "C", "likes") == "D");
  CHECK(kg::search_head_entity(m, "likes", "B") == "A");
}

TEST_CASE("relation search on a two-relation fixture") {
  std::vector<kg::Triple> triples = {{"A", "likes", "B"}, {"C", "likes", "D"}, {"B", "owns", "E"},
                                     {"D", "owns", "F"}};
  auto m = kg::train_transe({"A", "B", "C", "D", "E", "F"}, triples, kg::TransEHyper{});
  CHECK(kg::search_relation(m, "A", "B") == "likes");
  CHECK(kg::search_relation(m, "D", "F") == "owns");
  for (const auto& t : triples) {
    auto got = kg::search_tail_entity(m, t.head, t.relation);
    CHECK(std::find(m.entities.ids().begin(), m.entities.ids().end(), got) != m.entities.ids().end());
  }
}

TEST_CASE("distance is invariant under translating head and tail together") {
  std::mt19937 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> h(16), r(16), t(16), c(16);
    for (auto* v : {&h, &r, &t, &c})
      for (auto& x : *v) x = normal(rng);
    double before = kg::distance(h, r, t);
    for (std::size_t k = 0; k < h.size(); ++k) {
      h[k] += c[k];
      t[k] += c[k];
    }
    CHECK(kg::distance(h, r, t) == doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("margin loss gradient matches central finite differences") {
  std::mt19937 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double step = 1e-6;
  double worst = 0;
  int active = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 6;
    std::vector<double> h(d), r(d), t(d), hn(d), tn(d);
    for (auto* v : {&h, &r, &t, &hn, &tn})
      for (auto& x : *v) x = normal(rng);
    const double margin = 4.0;
    auto g = kg::margin_loss(h, r, t, hn, tn, margin);
    if (g.loss <= 0.0) continue;
    ++active;
    auto check = [&](std::vector<double>& v, const std::vector<double>& grad) {
      for (std::size_t k = 0; k < d; ++k) {
        const double keep = v[k];
        v[k] = keep + step;
        double up = kg::margin_loss(h, r, t, hn, tn, margin).loss;
        v[k] = keep - step;
        double down = kg::margin_loss(h, r, t, hn, tn, margin).loss;
        v[k] = keep;
        double fd = (up - down) / (2 * step);
        worst = std::max(worst, std::fabs(fd - grad[k]) / std::max({std::fabs(fd), std::fabs(grad[k]), 1e-8}));
      }
    };
    check(h, g.dh);
    check(r, g.dr);
    check(t, g.dt);
    check(hn, g.dh_neg);
    check(tn, g.dt_neg);
  }
  CHECK(active > 10);
  CHECK(worst < 1e-4);
  std::vector<double> z(3, 0.0);
  CHECK(kg::margin_loss(z, z, z, z, z, 0.0).loss == 0.0);
}

TEST_CASE("zero epochs equal the normalized initialization") {
  kg::TransEHyper h;
  h.epochs = 0;
  auto trained = kg::train_transe({"A", "B", "C", "D"}, kToy, h);
  auto init = kg::init_transe({"A", "B", "C", "D"}, {"likes"}, h);
  CHECK(trained.entities == init.entities);
  CHECK(trained.relations == init.relations);
  for (std::size_t i = 0; i < init.entities.rows(); ++i) {
    CHECK(l2_norm(init.entities.row(i)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact translation is found by search") {
  kg::TransEHyper h;
  h.dim = 2;
  auto m = kg::init_transe({"a", "b", "c"}, {"r"}, h);
  auto set = [](std::span<double> row, double x, double y) {
    row[0] = x;
    row[1] = y;
  };
  set(m.entities.row(m.entities.find("a")), 1, 0);
  set(m.entities.row(m.entities.find("b")), 0, 1);
  set(m.entities.row(m.entities.find("c")), -1, 0);
  set(m.relations.row(0), -1, 1);
  CHECK(kg::search_tail_entity(m, "a", "r") == "b");
  CHECK(kg::search_head_entity(m, "r", "b") == "a");
}

TEST_CASE("wordnet fixture and errors") {
  auto g = fixtures::wordnet();
  auto triples = kg::triples_of(g);
  CHECK(!triples.empty());
  auto m = kg::train_transe(g, kg::TransEHyper{});
  CHECK(kg::filtered_hits_at(m, triples, 10) > 0.5);
  CHECK(code_of([&] { kg::search_tail_entity(m, "no.such.entity", triples[0].relation); }) ==
        ErrorCode::UnknownEntity);
  CHECK(code_of([&] { kg::search_tail_entity(m, triples[0].head, "_nothing"); }) == ErrorCode::UnknownRelation);

  auto plain = testing::undirected(2, {{0, 1}});
  CHECK(code_of([&] { kg::triples_of(plain); }) == ErrorCode::MissingRelationLabels);
  CHECK(code_of([&] { kg::train_transe({"A"}, {}, kg::TransEHyper{}); }) == ErrorCode::EmptyTraining);

  auto back = kg::KgModel::from_json(m.to_json());
  CHECK(back.entities == m.entities);
  CHECK(back.relations == m.relations);
  CHECK(back.triples == m.triples);
}
