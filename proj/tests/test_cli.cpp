#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support.hpp"
#include "gtr/eval.hpp"
#include "gtr/kg.hpp"
#include "gtr/prompt_gen.hpp"
#include "gtr/service.hpp"

using namespace gtr;

namespace {

struct Run {
  int status;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "gtr_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

// Runs the CLI against the shipped registry; stderr is discarded.
Run cli(const std::vector<std::string>& args) {
  std::string cmd = "cd " + quote(scratch().string()) + " && env -u GTR_CONFIG " + quote(GTR_CLI) +
                    " --registry " + quote(std::string(GTR_REPO_DATA) + "/registry.json");
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  while (auto n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("reason prints the post-processed statement") {
  auto r = cli({"reason", "The first paper in Cora has a topic of [GR(GL(\"cora\"), \"graph_bert:topic\", {Paper#1})-->r]."});
  CHECK(r.status == 0);
  CHECK(r.out == "The first paper in Cora has a topic of Neural Networks.\n");
}

TEST_CASE("exit codes follow the error category") {
  CHECK(cli({"reason", "[GR(GL(\"cora\""}).status == 2);
  CHECK(cli({"reason", "[GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:orderr\")-->r]"}).status == 3);
  CHECK(cli({"reason", "[GR(GL(\"nope\"), \"toolx:order\")-->r]"}).status == 4);
  CHECK(cli({"reason", "[GR(GL(\"cora\"), \"graph_bert:topic\", paper#424242)-->r]"}).status == 3);
  CHECK(cli({"reason", "--tolerant", "[GR(GL(\"nope\"), \"toolx:order\")-->r] x"}).status == 0);
  CHECK(cli({"load", "/nonexistent.json"}).status == 4);
  CHECK(cli({"bogus-command"}).status != 0);
  CHECK(cli({"infer", "x", "--endpoint",
             "http://127.0.0.1:1/generate"})
            .status == 5);
}

TEST_CASE("command line and in-process service agree byte for byte") {
  const std::string stmt =
      "Center " "[GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:center\")-->r], eccentricity "
      "[GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:eccentricity\")-->r].";
  auto r = cli({"reason", "--json", stmt});
  REQUIRE(r.status == 0);
  auto data = std::make_unique<DataHub>(DatasetRegistry::from_file(std::string(GTR_REPO_DATA) + "/registry.json"));
  hub::ModelHub models;
  Pipeline p(*data, models);
  Service svc(p, nullptr);
  auto h = svc.handle("POST", "/reason", Json{{"statement", stmt}}.dump());
  CHECK(Json::parse(r.out)["output"] == Json::parse(h.body)["output"]);
}

TEST_CASE("split writes 1600 and 160 pairs") {
  std::vector<prompt::PromptPair> pairs;
  for (int i = 0; i < 2802; ++i) pairs.push_back({"in " + std::to_string(i), "out", std::nullopt});
  auto dir = scratch();
  prompt::write_jsonl(pairs, dir / "all.jsonl");
  auto r = cli({"split", (dir / "all.jsonl").string(), "--train", (dir / "train.jsonl").string(), "--test",
                (dir / "test.jsonl").string()});
  REQUIRE(r.status == 0);
  CHECK(prompt::read_jsonl(dir / "train.jsonl").size() == 1600);
  CHECK(prompt::read_jsonl(dir / "test.jsonl").size() == 160);
}

TEST_CASE("zero-epoch transe checkpoint equals the seeded initialization") {
  auto path = scratch() / "transe.json";
  auto r = cli({"train", "transe", "--dataset", "wordnet", "--epochs", "0", "--out", path.string()});
  REQUIRE(r.status == 0);
  auto doc = Json::parse(slurp(path));
  CHECK(doc["kind"] == "transe");
  kg::TransEHyper h;
  h.epochs = 0;
  auto expected = kg::train_transe(fixtures::wordnet(), h);
  auto got = kg::KgModel::from_json(doc["model"]);
  CHECK(got.entities == expected.entities);
  CHECK(got.relations == expected.relations);
}

TEST_CASE("eval of identical files scores 100") {
  auto dir = scratch();
  std::vector<prompt::PromptPair> pairs = {
      {"a", "The radius is [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:radius\")-->r].", "4"},
      {"b", "Plain words only here.", std::nullopt}};
  prompt::write_jsonl(pairs, dir / "gold.jsonl");
  auto r = cli({"eval", "--pred", (dir / "gold.jsonl").string(), "--gold", (dir / "gold.jsonl").string()});
  REQUIRE(r.status == 0);
  auto j = Json::parse(r.out);
  CHECK(j["bleu"].get<double>() == doctest::Approx(100.0));
  CHECK(j["rouge1"].get<double>() == doctest::Approx(100.0));
  CHECK(j["api_accuracy"].get<double>() == doctest::Approx(100.0));
}

TEST_CASE("prompt generation is reproducible from the command line") {
  const std::string templates = std::string(GTR_REPO_DATA) + "/templates.json";
  auto a = cli({"prompt-gen", "--templates", templates, "--dataset", "gpr", "--limit", "3"});
  auto b = cli({"prompt-gen", "--templates", templates, "--dataset", "gpr", "--limit", "3"});
  REQUIRE(a.status == 0);
  CHECK(!a.out.empty());
  CHECK(a.out == b.out);
}
