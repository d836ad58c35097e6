#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gtr/graph_store.hpp"
#include "gtr/rng.hpp"

namespace gtr {

/// Dense id → vector table, row-major.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> ids, std::size_t dim, std::uint64_t init_seed);

  /// Rows drawn uniformly from [lo, hi) in id order.
  static EmbeddingTable uniform(std::vector<std::string> ids, std::size_t dim, double lo, double hi,
                                std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return ids_.size(); }
  std::uint64_t init_seed() const { return init_seed_; }
  const std::vector<std::string>& ids() const { return ids_; }

  /// Row index, or -1 when absent.
  int find(std::string_view id) const;
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const EmbeddingTable& other) const {
    return ids_ == other.ids_ && dim_ == other.dim_ && data_ == other.data_;
  }

  Json to_json() const;
  static EmbeddingTable from_json(const Json& doc);

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::size_t dim_ = 0;
  std::uint64_t init_seed_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

}  // namespace gtr
