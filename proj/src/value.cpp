#include "gtr/value.hpp"

#include <cmath>
#include <cstdio>

namespace gtr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fixed(double v, int digits) {
  if (std::fabs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string render(const ReasoningValue& value) {
  return std::visit(
      overloaded{
          [](const Count& c) { return std::to_string(c.value); },
          [](const toolx::Ratio& r) {
            if (r.denominator == 1) return std::to_string(r.numerator);
            return std::to_string(r.numerator) + "/" + std::to_string(r.denominator);
          },
          [](const Decimal& d) { return fixed(d.value, d.digits); },
          [](const Label& l) { return l.text; },
          [](const NodeSetValue& s) {
            std::string out = "{";
            for (std::size_t i = 0; i < s.ids.size(); ++i) {
              if (i) out += ", ";
              out += s.ids[i];
            }
            return out + "}";
          },
          [](const NodeMapValue& m) {
            std::string out = "{";
            for (std::size_t i = 0; i < m.entries.size(); ++i) {
              if (i) out += ", ";
              out += m.entries[i].first + ": " + std::to_string(m.entries[i].second);
            }
            return out + "}";
          },
          [](const RankedList& l) {
            std::string out = "[";
            for (std::size_t i = 0; i < l.items.size(); ++i) {
              if (i) out += ", ";
              out += "'" + l.items[i] + "'";
            }
            return out + "]";
          },
          [](const GraphRef& g) { return g.handle.describe(); },
          [](const Boolean& b) { return std::string(b.value ? "the same" : "different"); },
      },
      value);
}

std::string kind_name(const ReasoningValue& value) {
  static const char* names[] = {"count", "ratio",       "decimal",   "label",  "node_set",
                                "node_map", "ranked_list", "graph_ref", "boolean"};
  return names[value.index()];
}

Json value_to_json(const ReasoningValue& value) {
  Json out = Json::object();
  out["kind"] = kind_name(value);
  out["rendered"] = render(value);
  std::visit(overloaded{
                 [&](const Count& c) { out["value"] = c.value; },
                 [&](const toolx::Ratio& r) {
                   out["numerator"] = r.numerator;
                   out["denominator"] = r.denominator;
                   out["value"] = r.value();
                 },
                 [&](const Decimal& d) { out["value"] = d.value; },
                 [&](const Label& l) { out["value"] = l.text; },
                 [&](const NodeSetValue& s) { out["value"] = s.ids; },
                 [&](const NodeMapValue& m) {
                   Json map = Json::object();
                   for (const auto& [k, v] : m.entries) map[k] = v;
                   out["value"] = map;
                 },
                 [&](const RankedList& l) { out["value"] = l.items; },
                 [&](const GraphRef& g) { out["value"] = g.handle.key(); },
                 [&](const Boolean& b) { out["value"] = b.value; },
             },
             value);
  return out;
}

}  // namespace gtr
