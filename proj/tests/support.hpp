#pragma once

#include <memory>

#include "gtr/baselines.hpp"
#include "gtr/community.hpp"
#include "gtr/executor.hpp"
#include "gtr/fixtures.hpp"
#include "gtr/gpr.hpp"

namespace gtr::testing {

// Data hub with every shipped fixture registered in memory.
inline std::unique_ptr<DataHub> fixture_hub() {
  auto hub = std::make_unique<DataHub>();
  for (auto& [name, d] : fixtures::all()) hub->put(name, std::move(d));
  return hub;
}

struct World {
  std::unique_ptr<DataHub> data = fixture_hub();
  hub::ModelHub models;
  Executor executor{*data, models};
};

inline GraphDataset undirected(int n, const std::vector<gpr::Edge>& edges) { return gpr::from_edges("g", n, edges); }

}  // namespace gtr::testing
