// qfse: serve, simulate, evaluate, report, generate-benchmark.
//
// Exit codes: 0 ok, 1 data error, 2 usage or configuration error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>

#include "CLI11.hpp"
#include "qfse/errors.hpp"
#include "qfse/report.hpp"
#include "qfse/service.hpp"
#include "qfse/simharness.hpp"
#include "qfse/synth.hpp"

namespace fs = std::filesystem;
using namespace qfse;

namespace {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ArgumentError("bad number for " + what + ": " + s);
}

SystemConfig load_system(const std::string& spec) {
  if (spec == "s1") return SystemConfig::s1();
  if (spec == "s2") return SystemConfig::s2();
  std::ifstream in(spec);
  if (!in) throw ArgumentError("--system must be s1, s2 or a readable JSON file: " + spec);
  std::ostringstream ss;
  ss << in.rdbuf();
  return SystemConfig::from_json(ss.str());
}

fs::path find_embeddings(const fs::path& corpus_root) {
  for (const auto& p : {corpus_root.parent_path() / "embeddings.txt", corpus_root / "embeddings.txt"}) {
    if (fs::exists(p)) return p;
  }
  throw ArgumentError("no embeddings.txt next to the corpus root; pass --embeddings");
}

int run_serve(const std::string& config_path, const std::string& listen_override) {
  ServiceConfig cfg;
  std::unique_ptr<Service> service;
  try {
    cfg = ServiceConfig::load(config_path);
    if (!listen_override.empty()) {
      const auto colon = listen_override.rfind(':');
      if (colon == std::string::npos) throw ArgumentError("--listen must be host:port");
      cfg.host = listen_override.substr(0, colon);
      cfg.port = std::stoi(listen_override.substr(colon + 1));
    }
    service = std::make_unique<Service>(cfg);
  } catch (const std::exception& e) {
    std::cerr << "qfse serve: " << e.what() << "\n";
    return kUsageError;
  }

  // Route SIGINT/SIGTERM to a waiter thread so the server can stop cleanly.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  HttpServer http(*service);
  int port = 0;
  try {
    port = http.bind(cfg.host, cfg.port);
  } catch (const std::exception& e) {
    std::cerr << "qfse serve: " << e.what() << "\n";
    return kUsageError;
  }
  std::cout << "listening on " << cfg.host << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    http.stop();
  });
  http.listen();
  // listen() also returns if the server fails; wake the waiter either way.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  std::cout << "stopped" << std::endl;
  return kOk;
}

struct SimulateArgs {
  std::string corpus_root, embeddings, system = "s1", script = "sug", out_dir;
  std::uint64_t seed = 0;
  int queries = 10;
};

int run_simulate(const SimulateArgs& a) {
  SystemConfig config;
  ScriptLabel label;
  fs::path emb_path;
  try {
    config = load_system(a.system);
    label = parse_script_label(a.script);
    if (label == ScriptLabel::Custom) throw ArgumentError("--script must be sug or oracle");
    emb_path = a.embeddings.empty() ? find_embeddings(a.corpus_root) : fs::path(a.embeddings);
    if (a.queries < 0) throw ArgumentError("--queries must be >= 0");
  } catch (const ArgumentError& e) {
    std::cerr << "qfse simulate: " << e.what() << "\n";
    return kUsageError;
  }
  config.seed = a.seed;
  try {
    const auto topics = load_corpus_root(a.corpus_root);
    if (topics.empty()) throw IngestError("no topics under " + a.corpus_root);
    auto store = std::make_shared<const EmbeddingStore>(EmbeddingStore::load(emb_path));
    const auto result = simulate_batch(topics, store, config, label, a.seed, a.out_dir, a.queries);
    for (const auto& p : result.written) std::cout << p.string() << "\n";
    for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
    return result.errors.empty() ? kOk : kDataError;
  } catch (const std::exception& e) {
    std::cerr << "qfse simulate: " << e.what() << "\n";
    return kDataError;
  }
}

struct EvaluateArgs {
  std::string logs_dir, corpus_root, out;
  std::string variants = "r1,r2,rl,rsu";
  std::string auc_lo, auc_hi;
  std::string sal = "150,250,350";
  std::string las;
  int bootstrap_iters = 10000;
  double curve_step = 10;
  int min_sessions = 1;
  std::uint64_t seed = 0;
};

int run_evaluate(const EvaluateArgs& a) {
  ExperimentSpec spec;
  try {
    spec.variants.clear();
    for (const auto& v : split(a.variants, ',')) spec.variants.push_back(parse_rouge_variant(v));
    if (!a.auc_lo.empty()) spec.auc_lo = parse_double(a.auc_lo, "--auc-lo");
    if (!a.auc_hi.empty()) spec.auc_hi = parse_double(a.auc_hi, "--auc-hi");
    spec.sal_lengths.clear();
    for (const auto& l : split(a.sal, ',')) spec.sal_lengths.push_back(parse_double(l, "--sal"));
    for (const auto& item : split(a.las, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ArgumentError("--las items look like r1=0.37");
      const auto variant = rouge_variant_name(parse_rouge_variant(item.substr(0, eq)));
      spec.las_scores[variant] = parse_double(item.substr(eq + 1), "--las");
    }
    spec.bootstrap_iters = a.bootstrap_iters;
    spec.curve_step = a.curve_step;
    spec.min_sessions = a.min_sessions;
    spec.seed = a.seed;
    spec.validate();
  } catch (const ArgumentError& e) {
    std::cerr << "qfse evaluate: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    if (!fs::is_directory(a.logs_dir)) throw IngestError("logs directory not found: " + a.logs_dir);
    const auto records = load_session_logs(a.logs_dir);
    if (records.empty()) throw IngestError("no session logs in " + a.logs_dir);
    std::map<std::string, std::vector<TokenList>> refs;
    for (const auto& t : load_corpus_root(a.corpus_root)) {
      if (t.eval_usable()) refs[t.topic_id()] = t.reference_tokens();
    }
    const auto report = evaluate(records, refs, spec);
    write_report(report, a.out);
    std::cout << "evaluated " << records.size() << " sessions; report in " << a.out << "\n";
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "qfse evaluate: " << e.what() << "\n";
    return kDataError;
  }
}

struct GenerateArgs {
  std::string out;
  std::string preset = "benchmark";
  std::uint64_t seed = 2020;
};

int run_generate(const GenerateArgs& a) {
  SynthOptions o;
  if (a.preset == "latency") {
    o = SynthOptions::latency();
  } else if (a.preset != "benchmark") {
    std::cerr << "qfse generate-benchmark: --preset must be benchmark or latency\n";
    return kUsageError;
  }
  o.seed = a.seed;
  try {
    write_benchmark(generate_benchmark(o), a.out);
  } catch (const std::exception& e) {
    std::cerr << "qfse generate-benchmark: " << e.what() << "\n";
    return kDataError;
  }
  std::cout << "wrote " << a.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-focused summary expansion: serve, simulate, evaluate, report"};
  app.require_subcommand(1, 1);

  std::string config_path, listen;
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("config", config_path, "Service config JSON")->required();
  serve->add_option("--listen", listen, "Override host:port from the config");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run scripted sessions for every topic");
  simulate->add_option("--corpus-root", sim.corpus_root)->required();
  simulate->add_option("--embeddings", sim.embeddings, "Embedding file (default: embeddings.txt beside the corpus root)");
  simulate->add_option("--system", sim.system, "s1, s2 or a SystemConfig JSON file");
  simulate->add_option("--script", sim.script, "sug or oracle");
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--queries", sim.queries, "Queries per script");
  simulate->add_option("--out-dir", sim.out_dir)->required();

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score session logs and write CSV reports");
  evaluate_cmd->add_option("--logs-dir", ev.logs_dir)->required();
  evaluate_cmd->add_option("--corpus-root", ev.corpus_root)->required();
  evaluate_cmd->add_option("--variants", ev.variants, "Comma list of r1,r2,rl,rsu");
  evaluate_cmd->add_option("--auc-lo", ev.auc_lo);
  evaluate_cmd->add_option("--auc-hi", ev.auc_hi);
  evaluate_cmd->add_option("--sal", ev.sal, "Score@Length word lengths");
  evaluate_cmd->add_option("--las", ev.las, "Length@Score targets, e.g. r1=0.37,r2=0.08");
  evaluate_cmd->add_option("--bootstrap-iters", ev.bootstrap_iters);
  evaluate_cmd->add_option("--curve-step", ev.curve_step);
  evaluate_cmd->add_option("--min-sessions", ev.min_sessions);
  evaluate_cmd->add_option("--seed", ev.seed);
  evaluate_cmd->add_option("--out", ev.out, "Report directory")->required();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Print a summary of a report directory");
  report->add_option("--report-dir", report_dir)->required();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate-benchmark", "Write the synthetic benchmark");
  generate->add_option("--out", gen.out)->required();
  generate->add_option("--preset", gen.preset, "benchmark or latency");
  generate->add_option("--seed", gen.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (*serve) return run_serve(config_path, listen);
  if (*simulate) return run_simulate(sim);
  if (*evaluate_cmd) return run_evaluate(ev);
  if (*generate) return run_generate(gen);
  if (*report) {
    try {
      std::cout << summarize_report(report_dir);
      return kOk;
    } catch (const ArgumentError& e) {
      std::cerr << "qfse report: " << e.what() << "\n";
      return kUsageError;
    } catch (const std::exception& e) {
      std::cerr << "qfse report: " << e.what() << "\n";
      return kDataError;
    }
  }
  return kUsageError;
}
