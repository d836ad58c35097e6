#include "gtr/recsys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

#include "gtr/rng.hpp"

namespace gtr::recsys {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

// −ln σ(x), stable for large |x|
double neg_log_sigmoid(double x) {
  return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

}  // namespace

InteractionData split_interactions(const GraphDataset& g) {
  std::set<std::string> sources, targets;
  for (const auto& l : g.links()) {
    sources.insert(l.source);
    targets.insert(l.target);
  }
  for (const auto& s : sources) {
    if (targets.count(s)) {
      throw Error(ErrorCode::NotBipartite, "node '" + s + "' is both a user and an item in " + g.profile.name);
    }
  }
  InteractionData out;
  out.users.assign(sources.begin(), sources.end());
  for (const auto& n : g.nodes()) {
    if (!sources.count(n.id)) out.items.push_back(n.id);
  }
  natural_sort(out.users);
  natural_sort(out.items);

  std::map<std::string, std::vector<std::pair<std::int64_t, std::size_t>>> by_user;
  for (std::size_t k = 0; k < g.links().size(); ++k) {
    const auto& l = g.links()[k];
    by_user[l.source].emplace_back(l.timestamp.value_or(0), k);
  }
  for (auto& [user, events] : by_user) {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t held = events.size() >= 2 ? events.size() - 1 : events.size();
    for (std::size_t e = 0; e < events.size(); ++e) {
      const auto& item = g.links()[events[e].second].target;
      if (e == held) {
        out.holdout.emplace_back(user, item);
      } else {
        out.history[user].insert(item);
      }
    }
  }
  // an item seen in training is never the held-out positive
  std::erase_if(out.holdout, [&](const auto& p) { return out.history[p.first].count(p.second) > 0; });
  return out;
}

double BprModel::score(const std::string& user, const std::string& item) const {
  int u = users.find(user);
  if (u < 0) throw Error(ErrorCode::UnknownUser, "unknown user '" + user + "'");
  int i = items.find(item);
  if (i < 0) throw Error(ErrorCode::UnknownItem, "unknown item '" + item + "'");
  return dot(users.row(u), items.row(i));
}

Json BprModel::to_json() const {
  Json hist = Json::object();
  for (const auto& [u, items_seen] : history) hist[u] = std::vector<std::string>(items_seen.begin(), items_seen.end());
  return Json{{"model", "bpr"},
              {"hyper",
               {{"dim", hyper.dim},
                {"learning_rate", hyper.learning_rate},
                {"l2", hyper.l2},
                {"epochs", hyper.epochs},
                {"seed", hyper.seed},
                {"negatives", hyper.negatives}}},
              {"users", users.to_json()},
              {"items", items.to_json()},
              {"history", hist}};
}

BprModel BprModel::from_json(const Json& doc) {
  BprModel m;
  const auto& h = doc.at("hyper");
  m.hyper = {h.at("dim").get<std::size_t>(), h.at("learning_rate").get<double>(), h.at("l2").get<double>(),
             h.at("epochs").get<int>(), h.at("seed").get<std::uint64_t>(), h.value("negatives", 0)};
  m.users = EmbeddingTable::from_json(doc.at("users"));
  m.items = EmbeddingTable::from_json(doc.at("items"));
  for (const auto& [u, list] : doc.at("history").items()) {
    for (const auto& i : list) m.history[u].insert(i.get<std::string>());
  }
  return m;
}

TripletGradient bpr_triplet(std::span<const double> u, std::span<const double> i,
                            std::span<const double> j, double l2) {
  const std::size_t d = u.size();
  double x = 0.0;
  for (std::size_t k = 0; k < d; ++k) x += u[k] * (i[k] - j[k]);
  TripletGradient g;
  g.loss = neg_log_sigmoid(x) + 0.5 * l2 * (dot(u, u) + dot(i, i) + dot(j, j));
  const double s = sigmoid(-x);  // −∂/∂x of −ln σ(x)
  g.du.resize(d);
  g.di.resize(d);
  g.dj.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    g.du[k] = -s * (i[k] - j[k]) + l2 * u[k];
    g.di[k] = -s * u[k] + l2 * i[k];
    g.dj[k] = s * u[k] + l2 * j[k];
  }
  return g;
}

double mean_pairwise_loss(const BprModel& m) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& [user, seen] : m.history) {
    int u = m.users.find(user);
    std::vector<double> scores(m.items.rows());
    for (std::size_t i = 0; i < m.items.rows(); ++i) scores[i] = dot(m.users.row(u), m.items.row(i));
    for (const auto& pos : seen) {
      double sp = scores[m.items.find(pos)];
      for (std::size_t j = 0; j < m.items.rows(); ++j) {
        if (seen.count(m.items.ids()[j])) continue;
        total += neg_log_sigmoid(sp - scores[j]);
        ++n;
      }
    }
  }
  return n ? total / static_cast<double>(n) : 0.0;
}

BprModel train_bpr(const InteractionData& data, const BprHyper& hyper) {
  BprModel m;
  m.hyper = hyper;
  m.history = data.history;
  m.users = EmbeddingTable::uniform(data.users, hyper.dim, -0.01, 0.01, hyper.seed);
  m.items = EmbeddingTable::uniform(data.items, hyper.dim, -0.01, 0.01, hyper.seed + 1);

  // The triplet sequence is drawn once and swept every epoch.
  Rng rng(hyper.seed + 2);
  std::vector<std::array<int, 3>> triplets;
  for (const auto& [user, seen] : data.history) {
    int u = m.users.find(user);
    std::vector<int> unseen;
    for (std::size_t j = 0; j < m.items.rows(); ++j) {
      if (!seen.count(m.items.ids()[j])) unseen.push_back(static_cast<int>(j));
    }
    for (const auto& item : seen) {
      int i = m.items.find(item);
      if (i < 0) throw Error(ErrorCode::UnknownItem, "unknown item '" + item + "'");
      if (unseen.empty()) continue;
      if (hyper.negatives == 0) {
        for (int j : unseen) triplets.push_back({u, i, j});
      } else {
        for (int n = 0; n < hyper.negatives; ++n) triplets.push_back({u, i, unseen[rng.below(unseen.size())]});
      }
    }
  }
  if (triplets.empty()) throw Error(ErrorCode::EmptyTraining, "no training interactions with unseen items");
  rng.shuffle(triplets);

  m.epoch_loss.push_back(mean_pairwise_loss(m));
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    for (const auto& [u, i, j] : triplets) {
      auto g = bpr_triplet(m.users.row(u), m.items.row(i), m.items.row(j), hyper.l2);
      auto ur = m.users.row(u), ir = m.items.row(i), jr = m.items.row(j);
      for (std::size_t k = 0; k < hyper.dim; ++k) {
        ur[k] -= hyper.learning_rate * g.du[k];
        ir[k] -= hyper.learning_rate * g.di[k];
        jr[k] -= hyper.learning_rate * g.dj[k];
      }
    }
    m.epoch_loss.push_back(mean_pairwise_loss(m));
  }
  return m;
}

BprModel train_bpr(const GraphDataset& g, const BprHyper& hyper) {
  return train_bpr(split_interactions(g), hyper);
}

double recommendation(const BprModel& model, const std::string& user, const std::string& item) {
  return sigmoid(model.score(user, item));
}

std::vector<std::pair<std::string, double>> topk_recommendation(const BprModel& model,
                                                                const std::string& user, long long k) {
  if (k < 1) throw Error(ErrorCode::BadK, "k must be at least 1, got " + std::to_string(k));
  int u = model.users.find(user);
  if (u < 0) throw Error(ErrorCode::UnknownUser, "unknown user '" + user + "'");
  static const std::set<std::string> none;
  auto hist = model.history.find(user);
  const auto& seen = hist == model.history.end() ? none : hist->second;

  std::vector<std::pair<std::string, double>> ranked;
  for (std::size_t i = 0; i < model.items.rows(); ++i) {
    const auto& id = model.items.ids()[i];
    if (!seen.count(id)) ranked.emplace_back(id, sigmoid(dot(model.users.row(u), model.items.row(i))));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return natural_less(a.first, b.first);
  });
  if (static_cast<long long>(ranked.size()) > k) ranked.resize(k);
  return ranked;
}

double holdout_auc(const BprModel& model, const std::vector<std::pair<std::string, std::string>>& holdout) {
  double total = 0.0;
  std::size_t users = 0;
  for (const auto& [user, positive] : holdout) {
    double sp = model.score(user, positive);
    auto hist = model.history.find(user);
    double wins = 0.0;
    std::size_t n = 0;
    for (const auto& item : model.items.ids()) {
      if (item == positive || (hist != model.history.end() && hist->second.count(item))) continue;
      double sn = model.score(user, item);
      wins += sp > sn ? 1.0 : (sp == sn ? 0.5 : 0.0);
      ++n;
    }
    if (n) {
      total += wins / static_cast<double>(n);
      ++users;
    }
  }
  return users ? total / static_cast<double>(users) : 0.0;
}

GraphDataset planted_blocks(int users, int items, int blocks, std::uint64_t seed) {
  Rng rng(seed);
  DataProfile p;
  p.name = "planted";
  p.is_directed = true;
  std::vector<NodeRecord> nodes;
  for (int u = 0; u < users; ++u) nodes.push_back({"u" + std::to_string(u), std::nullopt, "user"});
  for (int i = 0; i < items; ++i) nodes.push_back({"i" + std::to_string(i), std::nullopt, "item"});
  std::vector<LinkRecord> links;
  const int upb = users / blocks, ipb = items / blocks;
  for (int u = 0; u < users; ++u) {
    int b = std::min(u / upb, blocks - 1);
    std::vector<int> block;
    for (int i = b * ipb; i < (b + 1) * ipb && i < items; ++i) block.push_back(i);
    rng.shuffle(block);
    for (std::size_t t = 0; t < block.size(); ++t) {
      LinkRecord l{"u" + std::to_string(u), "i" + std::to_string(block[t]), std::nullopt,
                   static_cast<std::int64_t>(1000 * (t + 1)), std::nullopt};
      links.push_back(l);
    }
  }
  p.order = nodes.size();
  p.size = links.size();
  return GraphDataset(std::move(p), std::move(nodes), std::move(links));
}

}  // namespace gtr::recsys
