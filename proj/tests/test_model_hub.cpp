#include <fstream>
#include <regex>
#include <sstream>

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

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::vector<dsl::ApiArg> args_of(const std::string& call) { return dsl::parse_call(call).args; }

}  // namespace

TEST_CASE("domain:function resolution") {
  hub::ModelHub models;
  auto& r = models.registry();
  CHECK(r.resolve("toolx:order").function == "order");
  CHECK(r.resolve("bpr:topk_recommendation").domain == "bpr");
  CHECK(r.resolve("Graph-Bert:Topic").key() == "graph_bert:topic");
  CHECK(r.resolve("transe:tail-entity").key() == "transe:tail_entity");
  CHECK(r.resolve("kmeans:common_community_check").result_kind == "boolean");

  CHECK(code_of([&] { r.resolve("toolxorder"); }) == ErrorCode::Malformed);
  CHECK(code_of([&] { r.resolve("a:b:c"); }) == ErrorCode::Malformed);
  CHECK(code_of([&] { r.resolve("toolx:orderr"); }) == ErrorCode::UnknownFunction);
  CHECK(category_of(ErrorCode::UnknownFunction) == ErrorCategory::Execution);
  auto near = r.suggestions("toolx:orderr");
  REQUIRE(!near.empty());
  CHECK(near.front() == "toolx:order");
  CHECK(message_of([&] { r.resolve("toolx:orderr"); }).find("toolx:order") != std::string::npos);
  CHECK(r.suggestions("graph:topic").front() == "graph_bert:topic");
}

TEST_CASE("every function named in the shipped templates resolves") {
  std::ifstream in(std::string(GTR_REPO_DATA) + "/templates.json");
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  hub::ModelHub models;
  std::regex name(R"re(\\"([a-z_]+:[a-z_]+)\\")re");
  int seen = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), name); it != std::sregex_iterator(); ++it) {
    CAPTURE((*it)[1].str());
    CHECK_NOTHROW(models.registry().resolve((*it)[1].str()));
    ++seen;
  }
  CHECK(seen > 20);
}

TEST_CASE("registration and catalog") {
  hub::ModelHub models({}, false);
  CHECK(models.registry().keys().empty());
  hub::register_toolx(models.registry());
  CHECK(code_of([&] { hub::register_toolx(models.registry()); }) == ErrorCode::DuplicateKey);
  auto cat = models.registry().catalog();
  REQUIRE(cat["functions"].is_array());
  bool found = false;
  for (const auto& f : cat["functions"]) {
    if (f["name"] == "toolx:shortest_path") {
      found = true;
      CHECK(f["arity"]["min"] == 2);
      CHECK(f["arity"]["max"] == 2);
      CHECK(f["result_kind"] == "count");
    }
  }
  CHECK(found);

  hub::ModelHub full;
  for (const char* key : {"toolx:order", "toolx:size", "toolx:density", "toolx:eccentricity", "toolx:radius",
                          "toolx:diameter", "toolx:center", "toolx:periphery", "toolx:shortest_path",
                          "toolx:avg_path_length", "kmeans:community", "kmeans:community_count",
                          "kmeans:common_community_check", "bpr:recommendation", "bpr:topk_recommendation",
                          "transe:relation", "transe:head_entity", "transe:tail_entity", "graph_bert:topic",
                          "seg_bert:molecule_function"}) {
    CAPTURE(key);
    CHECK_NOTHROW(full.registry().resolve(key));
  }
  CHECK(full.registry().resolve("graph_bert:topic").baseline_substitute);
}

TEST_CASE("argument binding") {
  hub::ModelHub models;
  const auto& sp = models.registry().resolve("toolx:shortest_path");
  auto bound = hub::bind_arguments(sp, args_of("[f(node#1, node#5)]"));
  CHECK(bound.size() == 2);
  CHECK(bound.count("source"));
  CHECK(bound.count("target"));
  CHECK(code_of([&] { hub::bind_arguments(sp, args_of("[f(node#1)]")); }) == ErrorCode::ArityError);
  CHECK(code_of([&] { hub::bind_arguments(sp, args_of("[f(1, 2, 3)]")); }) == ErrorCode::ArityError);

  const auto& density = models.registry().resolve("toolx:density");
  CHECK(hub::bind_arguments(density, args_of("[f(is_directed:False)]")).count("is_directed"));
  CHECK(hub::bind_arguments(density, {}).empty());
  CHECK(code_of([&] { hub::bind_arguments(density, args_of("[f(weighted:True)]")); }) == ErrorCode::ArityError);
  CHECK(code_of([&] { hub::bind_arguments(sp, args_of("[f(GR(GL(\"x\"), \"a:b\"), 1)]")); }) ==
        ErrorCode::ArityError);
}

TEST_CASE("edit distance") {
  CHECK(hub::edit_distance("", "") == 0);
  CHECK(hub::edit_distance("order", "orderr") == 1);
  CHECK(hub::edit_distance("kitten", "sitting") == 3);
  CHECK(hub::edit_distance("abc", "") == 3);
}

TEST_CASE("checkpoints install into the hub") {
  testing::World w;
  recsys::BprHyper h;
  h.epochs = 3;
  h.seed = 99;
  auto model = recsys::train_bpr(fixtures::movielens(), h);
  auto doc = hub::make_checkpoint("movielens", model);
  CHECK(doc["kind"] == "bpr");
  auto reparsed = Json::parse(doc.dump());
  CHECK(hub::install_checkpoint(w.models, reparsed) == "bpr:movielens");

  const auto& user = model.users.ids().front();
  const auto& item = model.items.ids().front();
  auto call = dsl::parse_call("[GR(GL(\"movielens\"), \"bpr:recommendation\", user#" + user + ", item#" + item + ")]");
  auto v = w.executor.execute(call);
  REQUIRE(std::holds_alternative<Decimal>(v));
  CHECK(std::get<Decimal>(v).value == doctest::Approx(recsys::recommendation(model, user, item)));

  CHECK(code_of([&] { hub::install_checkpoint(w.models, Json{{"kind", "bpr"}}); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { hub::install_checkpoint(w.models, Json{{"kind", "x"}, {"dataset", "d"}, {"model", {}}}); }) ==
        ErrorCode::SchemaError);

  kg::TransEHyper th;
  th.epochs = 0;
  auto km = kg::train_transe(fixtures::wordnet(), th);
  CHECK(hub::install_checkpoint(w.models, hub::make_checkpoint("wordnet", km)) == "transe:wordnet");
  const auto& t = km.triples.front();
  auto tail = w.executor.execute(dsl::parse_call("[GR(GL(\"wordnet\"), \"transe:tail_entity\", entity#" + t.head +
                                                 ", relation#" + t.relation + ")]"));
  CHECK(std::get<Label>(tail).text == kg::search_tail_entity(km, t.head, t.relation));
}

TEST_CASE("split_domain_function normalizes") {
  auto [d, f] = hub::split_domain_function(" Graph-Bert : Topic ");
  CHECK(d == "graph_bert");
  CHECK(f == "topic");
}
