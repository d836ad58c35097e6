#pragma once

// Tagged result of executing a call, and its statement rendering.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gtr/graph_store.hpp"
#include "gtr/toolx.hpp"

namespace gtr {

struct Count {
  long long value = 0;
  bool operator==(const Count&) const = default;
};

struct Decimal {
  double value = 0.0;
  int digits = 2;  // fraction digits used when rendering
  bool operator==(const Decimal&) const = default;
};

struct Label {
  std::string text;
  bool operator==(const Label&) const = default;
};

struct NodeSetValue {
  std::vector<NodeId> ids;  // natural order
  bool operator==(const NodeSetValue&) const = default;
};

struct NodeMapValue {
  std::vector<std::pair<NodeId, long long>> entries;  // natural key order
  bool operator==(const NodeMapValue&) const = default;
};

struct RankedList {
  std::vector<std::string> items;
  bool operator==(const RankedList&) const = default;
};

struct GraphRef {
  GraphHandle handle;
  bool operator==(const GraphRef&) const = default;
};

struct Boolean {
  bool value = false;
  bool operator==(const Boolean&) const = default;
};

using ReasoningValue = std::variant<Count, toolx::Ratio, Decimal, Label, NodeSetValue, NodeMapValue,
                                    RankedList, GraphRef, Boolean>;

/// Text spliced into a statement in place of a `-->r` call:
///   Count 10, Ratio 4/15, Decimal 2.86, Label Neural Networks,
///   NodeSet {5, 6}, NodeMap {0: 7, 1: 7}, RankedList ['i286', 'i12'],
///   Boolean the same / different, GraphRef GL("gpr", {"lollipop_graph"}).
std::string render(const ReasoningValue& value);

std::string kind_name(const ReasoningValue& value);

Json value_to_json(const ReasoningValue& value);

}  // namespace gtr
