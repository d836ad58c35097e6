#include "gtr/embedding.hpp"

#include <cmath>

namespace gtr {

EmbeddingTable::EmbeddingTable(std::vector<std::string> ids, std::size_t dim, std::uint64_t init_seed)
    : ids_(std::move(ids)), dim_(dim), init_seed_(init_seed), data_(ids_.size() * dim, 0.0) {
  for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], static_cast<int>(i));
}

EmbeddingTable EmbeddingTable::uniform(std::vector<std::string> ids, std::size_t dim, double lo,
                                       double hi, std::uint64_t seed) {
  EmbeddingTable t(std::move(ids), dim, seed);
  Rng rng(seed);
  for (auto& x : t.data_) x = rng.uniform(lo, hi);
  return t;
}

int EmbeddingTable::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? -1 : it->second;
}

Json EmbeddingTable::to_json() const {
  Json rows = Json::object();
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    auto r = row(i);
    rows[ids_[i]] = std::vector<double>(r.begin(), r.end());
  }
  return Json{{"dim", dim_}, {"init_seed", init_seed_}, {"rows", rows}};
}

EmbeddingTable EmbeddingTable::from_json(const Json& doc) {
  std::vector<std::string> ids;
  for (const auto& [id, _] : doc.at("rows").items()) ids.push_back(id);
  EmbeddingTable t(ids, doc.at("dim").get<std::size_t>(), doc.value("init_seed", std::uint64_t{0}));
  std::size_t i = 0;
  for (const auto& [id, values] : doc.at("rows").items()) {
    auto v = values.get<std::vector<double>>();
    if (v.size() != t.dim_) {
      throw Error(ErrorCode::SchemaError, "rows." + id + ": expected " + std::to_string(t.dim_) + " values");
    }
    std::copy(v.begin(), v.end(), t.row(i++).begin());
  }
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace gtr
