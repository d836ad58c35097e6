#include "doctest.h"
#include "mock_endpoint.hpp"
#include "support.hpp"
#include "gtr/service.hpp"

using namespace gtr;

namespace {

const std::string kCora = "The first paper in Cora has a topic of [GR(GL(\"cora\"), \"graph_bert:topic\", {Paper#1})-->r].";

struct Rig {
  testing::World world;
  Pipeline pipeline{*world.data, world.models, 16};
};

Json body_of(const Service::Response& r) { return Json::parse(r.body); }

}  // namespace

TEST_CASE("exit codes and HTTP statuses by category") {
  CHECK(exit_code(ErrorCode::ParseError) == 2);
  CHECK(exit_code(ErrorCode::UnknownFunction) == 3);
  CHECK(exit_code(ErrorCode::ArityError) == 3);
  CHECK(exit_code(ErrorCode::NotFound) == 4);
  CHECK(exit_code(ErrorCode::UnknownNode) == 3);
  CHECK(exit_code(ErrorCode::SchemaError) == 4);
  CHECK(exit_code(ErrorCode::Timeout) == 5);
  CHECK(exit_code(ErrorCode::ConfigError) == 1);
  CHECK(http_status(ErrorCode::ParseError) == 400);
  CHECK(http_status(ErrorCode::NotFound) == 404);
  CHECK(http_status(ErrorCode::UnknownFunction) == 404);
  CHECK(http_status(ErrorCode::UnknownNode) == 422);
  CHECK(http_status(ErrorCode::DisconnectedGraph) == 422);
  CHECK(http_status(ErrorCode::Unavailable) == 502);
}

TEST_CASE("pipeline strict and tolerant runs") {
  Rig rig;
  auto ok = rig.pipeline.reason(kCora);
  CHECK(ok.ok());
  CHECK(ok.output == "The first paper in Cora has a topic of Neural Networks.");

  auto broken = rig.pipeline.reason("x [GR(GL(\"cora\"");
  CHECK(broken.failure == ErrorCode::ParseError);
  auto kept = rig.pipeline.reason("x [GR(GL(\"cora\"", true);
  CHECK(kept.ok());
  CHECK(kept.output == "x [GR(GL(\"cora\"");
  CHECK(kept.diagnostics.size() == 1);

  auto failing = rig.pipeline.reason("n [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:nope\")-->r]");
  CHECK(failing.failure == ErrorCode::UnknownFunction);
  auto soft = rig.pipeline.reason("n [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:nope\")-->r]", true);
  CHECK(soft.ok());
  CHECK(soft.output == "n <reasoning-error: UnknownFunction>");
}

TEST_CASE("handle dispatches each endpoint") {
  Rig rig;
  Service svc(rig.pipeline, nullptr);

  auto health = svc.handle("GET", "/health", "");
  CHECK(health.status == 200);
  CHECK(health.body == "ok");

  auto cat = svc.handle("GET", "/catalog", "");
  CHECK(cat.status == 200);
  CHECK(body_of(cat)["functions"].size() > 20);
  CHECK(body_of(cat).contains("datasets"));

  auto r = svc.handle("POST", "/reason", Json{{"statement", kCora}}.dump());
  CHECK(r.status == 200);
  CHECK(r.content_type == "application/json");
  CHECK(body_of(r)["output"] == "The first paper in Cora has a topic of Neural Networks.");
  CHECK(body_of(r)["diagnostics"].empty());

  auto parse = svc.handle("POST", "/reason", Json{{"statement", "[GR("}}.dump());
  CHECK(parse.status == 400);
  CHECK(body_of(parse)["error"] == "ParseError");

  auto missing = svc.handle("POST", "/reason", Json{{"statement", "[GR(GL(\"nope\"), \"toolx:order\")-->r]"}}.dump());
  CHECK(missing.status == 404);
  CHECK(body_of(missing)["error"] == "NotFound");

  auto node = svc.handle("POST", "/reason",
                         Json{{"statement", "[GR(GL(\"cora\"), \"graph_bert:topic\", paper#424242)-->r]"}}.dump());
  CHECK(node.status == 422);
  CHECK(body_of(node)["error"] == "UnknownNode");
  CHECK(body_of(node)["diagnostics"][0]["canonical_query"].get<std::string>().find("424242") != std::string::npos);

  auto tolerant = svc.handle(
      "POST", "/reason", Json{{"statement", "[GR(GL(\"nope\"), \"toolx:order\")-->r]"}, {"tolerant", true}}.dump());
  CHECK(tolerant.status == 200);
  CHECK(body_of(tolerant)["diagnostics"].size() == 1);

  CHECK(svc.handle("POST", "/reason", "{oops").status == 400);
  CHECK(body_of(svc.handle("POST", "/reason", "{oops"))["error"] == "ConfigError");
  CHECK(svc.handle("POST", "/reason", Json{{"text", "x"}}.dump()).status == 400);
  CHECK(svc.handle("GET", "/nothing", "").status == 404);
  CHECK(svc.handle("GET", "/reason", "").status == 404);

  auto no_client = svc.handle("POST", "/infer", Json{{"input", "x"}}.dump());
  CHECK(no_client.status == 502);
  CHECK(body_of(no_client)["error"] == "Unavailable");
}

TEST_CASE("infer goes through the endpoint") {
  testing::MockEndpoint mock([](const std::string& body) {
    auto prompt = Json::parse(body)["prompt"].get<std::string>();
    auto pos = prompt.find("[TBR]");
    if (pos != std::string::npos) {
      prompt.replace(pos, 5, "[GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:order\")-->r]");
    }
    return std::make_pair(200, Json{{"text", prompt}}.dump());
  });
  llm::GenerationConfig cfg;
  cfg.endpoint_url = mock.url();
  cfg.retries = 0;
  auto client = std::make_shared<llm::Client>(cfg);
  Rig rig;
  Service svc(rig.pipeline, client);
  auto r = svc.handle("POST", "/infer", Json{{"input", "There exist [TBR] nodes in the lollipop graph."}}.dump());
  REQUIRE(r.status == 200);
  CHECK(body_of(r)["output"] == "There exist 10 nodes in the lollipop graph.");
  CHECK(body_of(r)["completion"] ==
        "There exist [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:order\")-->r] nodes in the lollipop graph.");

  llm::GenerationConfig dead = cfg;
  dead.endpoint_url = "http://127.0.0.1:" + std::to_string(testing::closed_port()) + "/g";
  Service down(rig.pipeline, std::make_shared<llm::Client>(dead));
  auto d = down.handle("POST", "/infer", Json{{"input", "x"}}.dump());
  CHECK(d.status == 502);
}

TEST_CASE("live HTTP matches in-process dispatch") {
  Rig rig;
  Service svc(rig.pipeline, nullptr);
  int port = svc.bind_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { svc.listen_after_bind(); });
  svc.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  auto body = Json{{"statement", kCora}}.dump();
  auto res = cli.Post("/reason", body, "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body == svc.handle("POST", "/reason", body).body);

  auto bad = cli.Post("/reason", Json{{"statement", "[GR("}}.dump(), "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto h = cli.Get("/health");
  REQUIRE(h);
  CHECK(h->body == "ok");

  svc.stop();
  t.join();
}
