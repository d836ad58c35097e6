// gtr: command-line front end.
//
// Exit codes: 0 ok, 1 usage/config, 2 parse, 3 execution, 4 data, 5 endpoint.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gtr/config.hpp"
#include "gtr/eval.hpp"
#include "gtr/fixtures.hpp"
#include "gtr/kg.hpp"
#include "gtr/prompt_gen.hpp"
#include "gtr/recsys.hpp"
#include "gtr/service.hpp"

using namespace gtr;

namespace {

struct Globals {
  std::string config;
  std::string registry;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> memory_capacity;
  std::vector<std::string> checkpoints;
};

AppConfig resolve_config(const Globals& g) {
  std::optional<std::filesystem::path> file;
  if (!g.config.empty()) file = g.config;
  auto c = load_config(file);
  if (!g.registry.empty()) c.registry = g.registry;
  if (g.seed) c.seed = *g.seed;
  if (g.memory_capacity) c.memory_capacity = *g.memory_capacity;
  if (c.registry.empty() && std::filesystem::exists("data/registry.json")) c.registry = "data/registry.json";
  return c;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::NotFound, "cannot write " + path);
  out << text;
}

// Data hub and model hub built from the resolved configuration.
struct Runtime {
  AppConfig config;
  DataHub data;
  hub::ModelHub models;

  explicit Runtime(const Globals& g)
      : config(resolve_config(g)),
        data(config.registry.empty() ? DatasetRegistry{} : DatasetRegistry::from_file(config.registry)),
        models(hub::HubSettings{config.seed, {}, {}}) {
    for (const auto& path : g.checkpoints) hub::install_checkpoint(models, read_json(path));
  }
};

void print_diagnostics(const Json& diagnostics) {
  for (const auto& d : diagnostics) {
    std::cerr << "diagnostic: " << d.value("error_code", "") << ": " << d.value("message", "");
    auto q = d.value("canonical_query", "");
    if (!q.empty()) std::cerr << " in " << q;
    std::cerr << "\n";
  }
}

int report(const ReasonOutcome& o, bool as_json) {
  if (as_json) {
    Json j;
    j["output"] = o.output;
    if (!o.completion.empty()) j["completion"] = o.completion;
    j["diagnostics"] = o.diagnostics;
    std::cout << j.dump() << "\n";
  } else {
    print_diagnostics(o.diagnostics);
    if (o.ok()) std::cout << o.output << "\n";
  }
  return o.failure ? exit_code(*o.failure) : 0;
}

std::vector<std::string> outputs_of(const std::vector<prompt::PromptPair>& pairs) {
  std::vector<std::string> out;
  for (const auto& p : pairs) out.push_back(p.output);
  return out;
}

Service* running_service = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph reasoning runtime: API-call statements over graph datasets"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Configuration file (JSON)");
  app.add_option("--registry", g.registry, "Dataset registry file");
  app.add_option("--seed", g.seed, "Seed for model training and sampling");
  app.add_option("--memory-capacity", g.memory_capacity, "Working memory capacity");
  app.add_option("--checkpoint", g.checkpoints, "Pre-trained model checkpoint(s) to install");

  std::function<int()> action;

  // load
  auto* load = app.add_subcommand("load", "Load and validate a dataset, print its profile");
  std::string load_name;
  load->add_option("dataset", load_name, "Registered name or file path")->required();
  load->callback([&] {
    action = [&] {
      Runtime rt(g);
      auto d = rt.data.load(load_name);
      auto doc = dataset_to_json(*d);
      std::cout << doc["data_profile"].dump(2) << "\n";
      return 0;
    };
  });

  // reason
  auto* reason = app.add_subcommand("reason", "Execute the API calls in a statement");
  std::string statement;
  bool tolerant = false, as_json = false;
  reason->add_option("statement", statement, "Statement with bracketed calls ('-' reads stdin)")->required();
  reason->add_flag("--tolerant", tolerant, "Keep going past malformed or failing calls");
  reason->add_flag("--json", as_json, "Print {output, diagnostics} as JSON");
  reason->callback([&] {
    action = [&] {
      if (statement == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        statement = buf.str();
        while (!statement.empty() && (statement.back() == '\n' || statement.back() == '\r')) statement.pop_back();
      }
      Runtime rt(g);
      Pipeline p(rt.data, rt.models, rt.config.memory_capacity);
      return report(p.reason(statement, tolerant), as_json);
    };
  });

  // infer
  auto* infer = app.add_subcommand("infer", "Annotate a statement through the completion endpoint, then reason");
  std::string infer_input, endpoint, dialect;
  infer->add_option("input", infer_input, "Plain input statement")->required();
  infer->add_option("--endpoint", endpoint, "Completion endpoint URL");
  infer->add_option("--dialect", dialect, "Endpoint dialect: native or openai");
  infer->add_flag("--tolerant", tolerant, "Keep going past malformed or failing calls");
  infer->add_flag("--json", as_json, "Print {output, completion, diagnostics} as JSON");
  infer->callback([&] {
    action = [&] {
      Runtime rt(g);
      auto cfg = rt.config.endpoint;
      if (!endpoint.empty()) cfg.endpoint_url = endpoint;
      if (!dialect.empty()) cfg.dialect = llm::dialect_from_string(dialect);
      llm::Client client(cfg);
      Pipeline p(rt.data, rt.models, rt.config.memory_capacity);
      return report(p.infer(infer_input, client, tolerant), as_json);
    };
  });

  // prompt-gen
  auto* gen = app.add_subcommand("prompt-gen", "Expand prompt templates into input/output pairs");
  std::string templates_path = "data/templates.json", gen_dataset, gen_out = "-", gen_dropped;
  std::size_t limit = 0;
  bool validate = false;
  gen->add_option("--templates", templates_path, "Template file")->capture_default_str();
  gen->add_option("--dataset", gen_dataset, "Only templates for this dataset");
  gen->add_option("--limit", limit, "Instances per template (0 = all)");
  gen->add_option("--out", gen_out, "Output JSONL file ('-' for stdout)");
  gen->add_flag("--validate", validate, "Re-execute and drop failing pairs");
  gen->add_option("--dropped", gen_dropped, "Write dropped pairs with reasons (JSONL)");
  gen->callback([&] {
    action = [&] {
      Runtime rt(g);
      Executor ex(rt.data, rt.models);
      auto pairs = prompt::expand_templates(prompt::load_templates(templates_path), gen_dataset, ex,
                                            {limit, rt.config.seed});
      if (validate) {
        auto v = prompt::validate_pairs(pairs, ex);
        if (!gen_dropped.empty()) {
          std::string text;
          for (const auto& d : v.dropped) {
            auto j = prompt::pair_to_json(d.pair);
            j["reason"] = d.reason;
            j["detail"] = d.detail;
            text += j.dump() + "\n";
          }
          write_text(gen_dropped, text);
        }
        std::cerr << "kept " << v.kept.size() << ", dropped " << v.dropped.size() << "\n";
        pairs = std::move(v.kept);
      }
      write_text(gen_out, prompt::to_jsonl(pairs));
      return 0;
    };
  });

  // validate
  auto* val = app.add_subcommand("validate", "Re-execute prompt pairs and drop failures");
  std::string val_in, val_kept = "-", val_dropped;
  val->add_option("pairs", val_in, "Input JSONL")->required();
  val->add_option("--kept", val_kept, "Kept pairs JSONL");
  val->add_option("--dropped", val_dropped, "Dropped pairs JSONL with reasons");
  val->callback([&] {
    action = [&] {
      Runtime rt(g);
      Executor ex(rt.data, rt.models);
      auto v = prompt::validate_pairs(prompt::read_jsonl(val_in), ex);
      write_text(val_kept, prompt::to_jsonl(v.kept));
      if (!val_dropped.empty()) {
        std::string text;
        for (const auto& d : v.dropped) {
          auto j = prompt::pair_to_json(d.pair);
          j["reason"] = d.reason;
          j["detail"] = d.detail;
          text += j.dump() + "\n";
        }
        write_text(val_dropped, text);
      }
      std::cerr << "kept " << v.kept.size() << ", dropped " << v.dropped.size() << "\n";
      return 0;
    };
  });

  // split
  auto* sp = app.add_subcommand("split", "Split prompt pairs into train and test files");
  std::string split_in, train_out, test_out;
  std::size_t n_test = 160, max_train = 1600;
  sp->add_option("pairs", split_in, "Input JSONL")->required();
  sp->add_option("--train", train_out, "Training pairs output")->required();
  sp->add_option("--test", test_out, "Test pairs output")->required();
  sp->add_option("--n-test", n_test, "Test pair count")->capture_default_str();
  sp->add_option("--max-train", max_train, "Training pair cap")->capture_default_str();
  sp->callback([&] {
    action = [&] {
      auto c = resolve_config(g);
      auto s = prompt::split(prompt::read_jsonl(split_in), c.seed, n_test, max_train);
      prompt::write_jsonl(s.train, train_out);
      prompt::write_jsonl(s.test, test_out);
      std::cerr << "train " << s.train.size() << ", test " << s.test.size() << "\n";
      return 0;
    };
  });

  // train
  auto* train = app.add_subcommand("train", "Train a bpr or transe model and write a checkpoint");
  std::string kind, train_dataset, ckpt_out = "-";
  std::optional<int> epochs;
  std::optional<std::size_t> dim;
  std::optional<double> lr;
  train->add_option("kind", kind, "bpr or transe")->required()->check(CLI::IsMember({"bpr", "transe"}));
  train->add_option("--dataset", train_dataset, "Dataset name or path")->required();
  train->add_option("--epochs", epochs, "Training epochs");
  train->add_option("--dim", dim, "Embedding dimension");
  train->add_option("--lr", lr, "Learning rate");
  train->add_option("--out", ckpt_out, "Checkpoint file ('-' for stdout)");
  train->callback([&] {
    action = [&] {
      Runtime rt(g);
      auto d = rt.data.load(train_dataset);
      const auto* graph = std::get_if<GraphDataset>(d.get());
      if (!graph) throw Error(ErrorCode::SchemaError, train_dataset + " is not a single-graph dataset");
      Json ckpt;
      if (kind == "bpr") {
        recsys::BprHyper h;
        h.seed = rt.config.seed;
        if (epochs) h.epochs = *epochs;
        if (dim) h.dim = *dim;
        if (lr) h.learning_rate = *lr;
        auto m = recsys::train_bpr(*graph, h);
        std::cerr << "final loss " << m.epoch_loss.back() << "\n";
        ckpt = hub::make_checkpoint(train_dataset, m);
      } else {
        kg::TransEHyper h;
        h.seed = rt.config.seed;
        if (epochs) h.epochs = *epochs;
        if (dim) h.dim = *dim;
        if (lr) h.learning_rate = *lr;
        ckpt = hub::make_checkpoint(train_dataset, kg::train_transe(*graph, h));
      }
      write_text(ckpt_out, ckpt.dump() + "\n");
      return 0;
    };
  });

  // eval
  auto* ev = app.add_subcommand("eval", "Score predicted outputs against gold outputs");
  std::string pred_path, gold_path, report_out = "-";
  ev->add_option("--pred", pred_path, "Predictions (prompt JSONL, 'output' field)")->required();
  ev->add_option("--gold", gold_path, "Gold pairs (prompt JSONL)")->required();
  ev->add_option("--out", report_out, "Report file ('-' for stdout)");
  ev->callback([&] {
    action = [&] {
      auto r = eval::evaluate(outputs_of(prompt::read_jsonl(pred_path)), outputs_of(prompt::read_jsonl(gold_path)));
      write_text(report_out, eval::report_to_json(r).dump(2) + "\n");
      return 0;
    };
  });

  // catalog
  auto* cat = app.add_subcommand("catalog", "List registered reasoning functions and datasets");
  cat->callback([&] {
    action = [&] {
      Runtime rt(g);
      Pipeline p(rt.data, rt.models, rt.config.memory_capacity);
      std::cout << p.catalog().dump(2) << "\n";
      return 0;
    };
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::optional<int> port;
  std::string host;
  serve->add_option("--port", port, "Listen port");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--endpoint", endpoint, "Completion endpoint URL for /infer");
  serve->callback([&] {
    action = [&] {
      Runtime rt(g);
      auto cfg = rt.config.endpoint;
      if (!endpoint.empty()) cfg.endpoint_url = endpoint;
      std::shared_ptr<llm::Client> client;
      if (!cfg.endpoint_url.empty()) client = std::make_shared<llm::Client>(cfg);
      Pipeline p(rt.data, rt.models, rt.config.memory_capacity);
      Service svc(p, client);
      running_service = &svc;
      std::signal(SIGINT, [](int) {
        if (running_service) running_service->stop();
      });
      std::signal(SIGTERM, [](int) {
        if (running_service) running_service->stop();
      });
      const auto h = host.empty() ? rt.config.host : host;
      const int pt = port.value_or(rt.config.port);
      std::cerr << "listening on " << h << ":" << pt << "\n";
      bool ok = svc.listen(h, pt);
      running_service = nullptr;
      if (!ok) {
        std::cerr << "error: cannot listen on " << h << ":" << pt << "\n";
        return 1;
      }
      return 0;
    };
  });

  // gen-fixtures
  auto* fx = app.add_subcommand("gen-fixtures", "Write the shipped datasets and registry");
  std::string fx_dir = "data";
  fx->add_option("--out", fx_dir, "Output directory")->capture_default_str();
  fx->callback([&] {
    action = [&] {
      std::filesystem::create_directories(fx_dir);
      Json registry = Json::object();
      for (const auto& [name, d] : fixtures::all()) {
        save_dataset_file(d, std::filesystem::path(fx_dir) / (name + ".json"));
        registry[name] = name + ".json";
      }
      write_text((std::filesystem::path(fx_dir) / "registry.json").string(), registry.dump(2) + "\n");
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return action ? action() : 0;
  } catch (const Error& e) {
    std::cerr << "error: " << code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
