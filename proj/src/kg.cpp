#include "gtr/kg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gtr/rng.hpp"

namespace gtr::kg {

std::vector<Triple> triples_of(const GraphDataset& g) {
  std::vector<Triple> out;
  for (const auto& l : g.links()) {
    if (!l.label || l.label->empty()) {
      throw Error(ErrorCode::MissingRelationLabels,
                  "link (" + l.source + ", " + l.target + ") in " + g.profile.name + " has no relation label");
    }
    out.push_back({l.source, *l.label, l.target});
  }
  return out;
}

namespace {

void normalize_rows(EmbeddingTable& t) {
  for (std::size_t i = 0; i < t.rows(); ++i) {
    auto r = t.row(i);
    double n = l2_norm(r);
    if (n > 0) {
      for (auto& x : r) x /= n;
    }
  }
}

int require(const EmbeddingTable& t, const std::string& id, ErrorCode code, const char* what) {
  int i = t.find(id);
  if (i < 0) throw Error(code, std::string("unknown ") + what + " '" + id + "'");
  return i;
}

// Index of the minimizer over ids in natural order.
template <typename Score>
std::string argmin(const EmbeddingTable& t, Score score) {
  std::vector<std::size_t> order(t.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return natural_less(t.ids()[a], t.ids()[b]); });
  double best = std::numeric_limits<double>::infinity();
  std::size_t pick = order.front();
  for (auto i : order) {
    double s = score(i);
    if (s < best) {
      best = s;
      pick = i;
    }
  }
  return t.ids()[pick];
}

}  // namespace

Json KgModel::to_json() const {
  Json list = Json::array();
  for (const auto& t : triples) list.push_back({t.head, t.relation, t.tail});
  return Json{{"model", "transe"},
              {"hyper",
               {{"dim", hyper.dim},
                {"margin", hyper.margin},
                {"learning_rate", hyper.learning_rate},
                {"epochs", hyper.epochs},
                {"seed", hyper.seed}}},
              {"entities", entities.to_json()},
              {"relations", relations.to_json()},
              {"triples", list}};
}

KgModel KgModel::from_json(const Json& doc) {
  KgModel m;
  const auto& h = doc.at("hyper");
  m.hyper = {h.at("dim").get<std::size_t>(), h.at("margin").get<double>(),
             h.at("learning_rate").get<double>(), h.at("epochs").get<int>(),
             h.at("seed").get<std::uint64_t>()};
  m.entities = EmbeddingTable::from_json(doc.at("entities"));
  m.relations = EmbeddingTable::from_json(doc.at("relations"));
  for (const auto& t : doc.at("triples")) {
    m.triples.push_back({t.at(0).get<std::string>(), t.at(1).get<std::string>(), t.at(2).get<std::string>()});
  }
  return m;
}

KgModel init_transe(std::vector<std::string> entities, std::vector<std::string> relations,
                    const TransEHyper& hyper) {
  const double bound = 6.0 / std::sqrt(static_cast<double>(hyper.dim));
  KgModel m;
  m.hyper = hyper;
  m.entities = EmbeddingTable::uniform(std::move(entities), hyper.dim, -bound, bound, hyper.seed);
  m.relations = EmbeddingTable::uniform(std::move(relations), hyper.dim, -bound, bound, hyper.seed + 1);
  normalize_rows(m.relations);
  normalize_rows(m.entities);
  return m;
}

double distance(std::span<const double> h, std::span<const double> r, std::span<const double> t) {
  double s = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    double d = h[k] + r[k] - t[k];
    s += d * d;
  }
  return std::sqrt(s);
}

MarginGradient margin_loss(std::span<const double> h, std::span<const double> r,
                           std::span<const double> t, std::span<const double> h_neg,
                           std::span<const double> t_neg, double margin) {
  const std::size_t d = h.size();
  MarginGradient g;
  g.dh.assign(d, 0.0);
  g.dr.assign(d, 0.0);
  g.dt.assign(d, 0.0);
  g.dh_neg.assign(d, 0.0);
  g.dt_neg.assign(d, 0.0);
  const double dp = distance(h, r, t);
  const double dn = distance(h_neg, r, t_neg);
  g.loss = std::max(0.0, margin + dp - dn);
  if (g.loss <= 0.0) return g;
  for (std::size_t k = 0; k < d; ++k) {
    double up = dp > 0 ? (h[k] + r[k] - t[k]) / dp : 0.0;
    double un = dn > 0 ? (h_neg[k] + r[k] - t_neg[k]) / dn : 0.0;
    g.dh[k] = up;
    g.dt[k] = -up;
    g.dr[k] = up - un;
    g.dh_neg[k] = -un;
    g.dt_neg[k] = un;
  }
  return g;
}

KgModel train_transe(std::vector<std::string> entities, const std::vector<Triple>& triples,
                     const TransEHyper& hyper, const EpochHook& hook) {
  if (triples.empty()) throw Error(ErrorCode::EmptyTraining, "no triples to train on");
  natural_sort(entities);
  std::set<std::string> rel_set;
  for (const auto& t : triples) rel_set.insert(t.relation);
  std::vector<std::string> relations(rel_set.begin(), rel_set.end());
  natural_sort(relations);

  KgModel m = init_transe(entities, relations, hyper);
  m.triples = triples;
  if (m.entities.rows() < 2) throw Error(ErrorCode::EmptyTraining, "corruption needs at least two entities");

  struct Indexed {
    int h, r, t;
  };
  std::vector<Indexed> data;
  for (const auto& t : triples) {
    data.push_back({require(m.entities, t.head, ErrorCode::UnknownEntity, "entity"),
                    m.relations.find(t.relation),
                    require(m.entities, t.tail, ErrorCode::UnknownEntity, "entity")});
  }

  Rng rng(hyper.seed + 2);
  const std::size_t n = m.entities.rows();
  const double lr = hyper.learning_rate;
  auto step = [lr](std::span<double> row, const std::vector<double>& grad) {
    for (std::size_t k = 0; k < row.size(); ++k) row[k] -= lr * grad[k];
  };
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(data);
    for (const auto& x : data) {
      int hn = x.h, tn = x.t;
      int replacement = static_cast<int>(rng.below(n - 1));
      if (rng.below(2) == 0) {
        hn = replacement >= x.h ? replacement + 1 : replacement;
      } else {
        tn = replacement >= x.t ? replacement + 1 : replacement;
      }
      auto row = [&](int i) {
        auto r = m.entities.row(i);
        return std::vector<double>(r.begin(), r.end());
      };
      auto rel = m.relations.row(x.r);
      std::vector<double> rv(rel.begin(), rel.end());
      auto g = margin_loss(row(x.h), rv, row(x.t), row(hn), row(tn), hyper.margin);
      if (g.loss <= 0.0) continue;
      step(m.entities.row(x.h), g.dh);
      step(m.relations.row(x.r), g.dr);
      step(m.entities.row(x.t), g.dt);
      step(m.entities.row(hn), g.dh_neg);
      step(m.entities.row(tn), g.dt_neg);
    }
    normalize_rows(m.entities);
    if (hook) hook(m, epoch);
  }
  return m;
}

KgModel train_transe(const GraphDataset& g, const TransEHyper& hyper, const EpochHook& hook) {
  auto triples = triples_of(g);
  std::vector<std::string> entities;
  for (const auto& n : g.nodes()) entities.push_back(n.id);
  return train_transe(std::move(entities), triples, hyper, hook);
}

std::string search_tail_entity(const KgModel& m, const std::string& head, const std::string& relation) {
  auto h = m.entities.row(require(m.entities, head, ErrorCode::UnknownEntity, "entity"));
  auto r = m.relations.row(require(m.relations, relation, ErrorCode::UnknownRelation, "relation"));
  return argmin(m.entities, [&](std::size_t i) { return distance(h, r, m.entities.row(i)); });
}

std::string search_head_entity(const KgModel& m, const std::string& relation, const std::string& tail) {
  auto r = m.relations.row(require(m.relations, relation, ErrorCode::UnknownRelation, "relation"));
  auto t = m.entities.row(require(m.entities, tail, ErrorCode::UnknownEntity, "entity"));
  return argmin(m.entities, [&](std::size_t i) { return distance(m.entities.row(i), r, t); });
}

std::string search_relation(const KgModel& m, const std::string& head, const std::string& tail) {
  auto h = m.entities.row(require(m.entities, head, ErrorCode::UnknownEntity, "entity"));
  auto t = m.entities.row(require(m.entities, tail, ErrorCode::UnknownEntity, "entity"));
  if (m.relations.rows() == 0) throw Error(ErrorCode::UnknownRelation, "model has no relations");
  return argmin(m.relations, [&](std::size_t i) { return distance(h, m.relations.row(i), t); });
}

double filtered_hits_at(const KgModel& m, const std::vector<Triple>& test, int k) {
  if (test.empty()) return 0.0;
  std::set<Triple> known(m.triples.begin(), m.triples.end());
  known.insert(test.begin(), test.end());
  int hits = 0;
  for (const auto& q : test) {
    auto h = m.entities.row(require(m.entities, q.head, ErrorCode::UnknownEntity, "entity"));
    auto r = m.relations.row(require(m.relations, q.relation, ErrorCode::UnknownRelation, "relation"));
    double target = distance(h, r, m.entities.row(require(m.entities, q.tail, ErrorCode::UnknownEntity, "entity")));
    int better = 0;
    for (std::size_t i = 0; i < m.entities.rows(); ++i) {
      const auto& cand = m.entities.ids()[i];
      if (cand == q.tail || known.count({q.head, q.relation, cand})) continue;
      if (distance(h, r, m.entities.row(i)) < target) ++better;
    }
    if (better < k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

}  // namespace gtr::kg
