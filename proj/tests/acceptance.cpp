// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Tolerances and time budgets are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "qfse/clustering.hpp"
#include "qfse/engine.hpp"
#include "qfse/evalkit.hpp"
#include "qfse/rouge.hpp"
#include "qfse/service.hpp"
#include "qfse/simharness.hpp"
#include "qfse/synth.hpp"

using namespace qfse;

namespace {

constexpr double kUmuxTol = 0.1;
constexpr double kRougeTol = 1e-12;
constexpr double kAucRiemannTol = 1e-6;
constexpr double kAucAdditivityTol = 1e-9;
constexpr double kLatencyP95Ms = 500;
constexpr double kInitialSummaryMs = 10'000;

using Seconds = double;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Check {
  std::string name;
  Seconds budget;
  std::function<Outcome()> run;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<RougeVariant> kVariants{RougeVariant::r1(), RougeVariant::r2(), RougeVariant::rl(),
                                          RougeVariant::su4()};

bool non_decreasing(const RecallCurve& c) {
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    if (c.points[i].score < c.points[i - 1].score) return false;
  }
  return true;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Bench {
  std::vector<TopicCorpus> topics;
  std::shared_ptr<const EmbeddingStore> store;
  std::map<std::string, std::shared_ptr<const TopicIndex>> index;
};

Bench load_bench(const std::filesystem::path& root) {
  Bench b;
  b.topics = load_corpus_root(root / "corpus");
  b.store = std::make_shared<const EmbeddingStore>(EmbeddingStore::load(root / "embeddings.txt"));
  for (const auto& t : b.topics) {
    b.index[t.topic_id()] = TopicIndex::build(std::make_shared<const TopicCorpus>(t), *b.store, 20);
  }
  return b;
}

Outcome umux() {
  const double reported = umux_lite(3.81, 4.51);
  const bool ok = std::abs(reported - 74.2) <= kUmuxTol && umux_lite(1, 1) == 22.9 && umux_lite(5, 5) == 87.9;
  return {ok, "umux(3.81,4.51)=" + fmt("%.4f", reported) + " umux(1,1)=" + fmt("%.4f", umux_lite(1, 1)) +
                  " umux(5,5)=" + fmt("%.4f", umux_lite(5, 5))};
}

Outcome rouge_oracle() {
  std::mt19937_64 rng(20200705);
  double worst = 0;
  const int kinds[4] = {1, 2, 'L', 'S'};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto cand = oracle::random_tokens(rng, 30, 10);
    const std::vector<TokenList> refs{oracle::random_tokens(rng, 30, 10)};
    for (int v = 0; v < 4; ++v) {
      const RougeScore got = rouge(cand, refs, kVariants[static_cast<std::size_t>(v)]);
      const auto want = oracle::rouge(cand, refs, kinds[v]);
      worst = std::max({worst, std::abs(got.precision - want.p), std::abs(got.recall - want.r),
                        std::abs(got.f1 - want.f)});
    }
  }
  return {worst <= kRougeTol, "1000 pairs x 4 variants, max abs diff " + fmt("%.3g", worst)};
}

Outcome monotonicity(const Bench& b) {
  int sessions = 0, bad = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto& t = b.topics[static_cast<std::size_t>(seed) % b.topics.size()];
    SystemConfig cfg = seed % 2 ? SystemConfig::s2() : SystemConfig::s1();
    cfg.seed = static_cast<std::uint64_t>(seed);
    const auto script = seed % 4 < 2 ? build_oracle(t, static_cast<std::uint64_t>(seed)) : build_lsug(t, cfg);
    const auto rec = run_simulation(b.index.at(t.topic_id()), b.store, cfg, script).record;
    const auto refs = t.reference_tokens();
    for (const auto& v : kVariants) bad += !non_decreasing(recall_curve(rec, refs, v, CurveMode::Recall));
    ++sessions;
  }
  return {bad == 0, std::to_string(sessions) + " sessions x 4 variants, " + std::to_string(bad) + " decreasing"};
}

Outcome auc_oracle() {
  std::mt19937_64 rng(77);
  // Spans divide the 10,000 cells, so integer knots sit on cell boundaries.
  const std::vector<int> spans{100, 125, 200, 250, 400, 500, 625, 1000};
  double worst_riemann = 0, worst_add = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<double, double>> pts;
    RecallCurve c;
    double x = static_cast<double>(rng() % 100);
    const int n = 2 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      const double y = static_cast<double>(rng() % 10000) / 10000.0;
      pts.emplace_back(x, y);
      c.points.push_back({x, y});
      x += 1 + static_cast<double>(rng() % 80);
    }
    const double lo = static_cast<double>(rng() % 300);
    const double hi = lo + spans[rng() % spans.size()];
    const double a = auc(c, lo, hi);
    worst_riemann = std::max(worst_riemann, std::abs(a - oracle::riemann(pts, lo, hi, 10000)));
    std::uniform_real_distribution<double> u(lo, hi);
    const double mid = u(rng);
    worst_add = std::max(worst_add, std::abs(auc(c, lo, mid) + auc(c, mid, hi) - a));
  }
  return {worst_riemann <= kAucRiemannTol && worst_add <= kAucAdditivityTol,
          "max Riemann diff " + fmt("%.3g", worst_riemann) + ", max additivity diff " + fmt("%.3g", worst_add)};
}

Outcome aggregation() {
  const double v = aggregate({{"A", 1}, {"A", 3}, {"B", 4}});
  return {v == 3.0, "aggregate({A:[1,3], B:[4]}) = " + fmt("%.17g", v)};
}

Outcome bound_ordering(const Bench& b) {
  std::ostringstream detail;
  bool ok = true;
  for (const auto& base : {SystemConfig::s1(), SystemConfig::s2()}) {
    std::vector<RecallCurve> oracle_curves, sug_curves;
    bool mono = true;
    for (const auto& t : b.topics) {
      const auto refs = t.reference_tokens();
      const auto& idx = b.index.at(t.topic_id());
      const auto o = run_simulation(idx, b.store, base, build_oracle(t, 0)).record;
      const auto s = run_simulation(idx, b.store, base, build_lsug(t, base)).record;
      for (const auto& v : kVariants) {
        mono &= non_decreasing(recall_curve(o, refs, v, CurveMode::Recall));
        mono &= non_decreasing(recall_curve(s, refs, v, CurveMode::Recall));
      }
      oracle_curves.push_back(recall_curve(o, refs, RougeVariant::r1(), CurveMode::Recall));
      sug_curves.push_back(recall_curve(s, refs, RougeVariant::r1(), CurveMode::Recall));
    }
    std::vector<RecallCurve> all = oracle_curves;
    all.insert(all.end(), sug_curves.begin(), sug_curves.end());
    const auto [lo, hi] = intersection_range(all);
    double oracle_auc = 0, sug_auc = 0;
    for (const auto& c : oracle_curves) oracle_auc += auc(c, lo, hi) / static_cast<double>(oracle_curves.size());
    for (const auto& c : sug_curves) sug_auc += auc(c, lo, hi) / static_cast<double>(sug_curves.size());
    ok &= mono && oracle_auc > sug_auc;
    detail << base.system_id << " R1 AUC[" << lo << "," << hi << "] oracle=" << fmt("%.2f", oracle_auc)
           << " sug=" << fmt("%.2f", sug_auc) << (mono ? " monotone" : " NOT monotone") << "; ";
  }
  return {ok, detail.str()};
}

Outcome no_repeat(const Bench& b) {
  int sessions = 0, repeats = 0;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto& t = b.topics[static_cast<std::size_t>(i) % b.topics.size()];
    SystemConfig cfg = i % 2 ? SystemConfig::s2() : SystemConfig::s1();
    cfg.seed = static_cast<std::uint64_t>(i);
    Session s("s", b.index.at(t.topic_id()), b.store, cfg);
    std::set<SentenceKey> seen;
    for (const auto& k : s.initial().sentence_keys) repeats += !seen.insert(k).second;
    const auto& scus = t.scus();
    for (int q = 0; q < 25; ++q) {
      const auto pick = rng() % 3;
      const Interaction* it;
      if (pick == 0 && q > 0) {
        it = &s.respond("", QueryType::Repeat);
      } else if (pick == 1) {
        it = &s.respond(s.suggestions()[rng() % s.suggestions().size()], QueryType::Suggested);
      } else {
        it = &s.respond(scus[rng() % scus.size()], QueryType::FreeText);
      }
      for (const auto& sent : it->response_sentences) repeats += !seen.insert(sent.key()).second;
    }
    ++sessions;
  }
  return {repeats == 0, std::to_string(sessions) + " sessions x 25 queries, " + std::to_string(repeats) +
                            " repeated sentence keys"};
}

Outcome latency(const std::filesystem::path& scratch) {
  const auto bench = generate_benchmark(SynthOptions::latency());
  bench.embeddings.save(scratch / "latency_embeddings.txt");
  auto store = std::make_shared<const EmbeddingStore>(EmbeddingStore::load(scratch / "latency_embeddings.txt"));
  const auto& t = bench.topics[0];
  std::ostringstream detail;
  detail << t.documents().size() << " docs, " << t.sentences().size() << " sentences, dim " << store->dim()
         << "; ";
  bool ok = true;
  for (const auto& cfg : {SystemConfig::s1(), SystemConfig::s2()}) {
    const auto start = std::chrono::steady_clock::now();
    auto index = TopicIndex::build(std::make_shared<const TopicCorpus>(t), *store, cfg.pca_dim);
    Session s("lat", index, store, cfg);
    const double init_ms = elapsed_ms(start);
    std::vector<double> lat;
    const auto& scus = t.scus();
    for (int q = 0; q < 60; ++q) {
      const std::string query = q % 2 ? s.suggestions()[static_cast<std::size_t>(q) % s.suggestions().size()]
                                      : scus[static_cast<std::size_t>(q) % scus.size()];
      const auto qs = std::chrono::steady_clock::now();
      s.respond(query, QueryType::FreeText);
      lat.push_back(elapsed_ms(qs));
    }
    std::sort(lat.begin(), lat.end());
    const double p95 = lat[static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(lat.size()))) - 1];
    ok &= p95 < kLatencyP95Ms && init_ms < kInitialSummaryMs;
    detail << cfg.system_id << " initial " << fmt("%.1f", init_ms) << " ms, p95 respond " << fmt("%.2f", p95)
           << " ms; ";
  }
  return {ok, detail.str()};
}

Outcome determinism(const Bench& b, const std::filesystem::path& scratch) {
  bool ok = true;
  int files = 0;
  for (const auto& cfg : {SystemConfig::s1(), SystemConfig::s2()}) {
    for (auto label : {ScriptLabel::Sug, ScriptLabel::Oracle}) {
      const auto a = simulate_batch(b.topics, b.store, cfg, label, 42, scratch / "det_a");
      const auto c = simulate_batch(b.topics, b.store, cfg, label, 42, scratch / "det_b");
      ok &= a.errors.empty() && c.errors.empty() && a.written.size() == c.written.size();
      for (std::size_t i = 0; i < a.written.size() && i < c.written.size(); ++i) {
        ok &= slurp(a.written[i]) == slurp(c.written[i]);
        ++files;
      }
    }
  }
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::vector<Vector> pts(300, Vector(40));
  for (auto& p : pts)
    for (auto& x : p) x = g(rng);
  const auto r1 = pca_reduce(pts, 20), r2 = pca_reduce(pts, 20);
  const auto k1 = kmeans(r1, 30, 3), k2 = kmeans(r2, 30, 3);
  ok &= r1 == r2 && k1.assignments == k2.assignments && k1.centroids == k2.centroids;
  std::vector<double> vals(50);
  for (auto& v : vals) v = g(rng);
  const auto c1 = bootstrap_ci(vals, 0.95, 10000, 4), c2 = bootstrap_ci(vals, 0.95, 10000, 4);
  ok &= c1.lo == c2.lo && c1.hi == c2.hi;
  return {ok, std::to_string(files) + " log pairs byte-identical; PCA, kmeans and bootstrap repeat exactly"};
}

Outcome round_trip(const Bench& b, const std::filesystem::path& scratch) {
  int checked = 0, bad = 0;
  auto verify = [&](const SessionRecord& original, const std::filesystem::path& file,
                    const std::vector<TokenList>& refs) {
    const std::string bytes = slurp(file);
    const auto parsed = parse_session_record(bytes);
    bad += to_json_string(parsed) != bytes;
    for (const auto& v : kVariants) {
      for (auto mode : {CurveMode::Recall, CurveMode::F1}) {
        const auto x = recall_curve(original, refs, v, mode);
        const auto y = recall_curve(parsed, refs, v, mode);
        bool same = x.points.size() == y.points.size();
        for (std::size_t i = 0; same && i < x.points.size(); ++i) {
          same = x.points[i].length == y.points[i].length && x.points[i].score == y.points[i].score;
        }
        bad += !same;
      }
    }
    ++checked;
  };

  // Simulated logs.
  for (const auto& t : b.topics) {
    const auto rec = run_simulation(b.index.at(t.topic_id()), b.store, SystemConfig::s2(), build_oracle(t, 1)).record;
    const auto path = scratch / "rt_sim" / (t.topic_id() + ".json");
    save_session_record(path, rec);
    verify(rec, path, t.reference_tokens());
  }

  // Service logs through the full session lifecycle.
  ServiceConfig cfg;
  cfg.log_dir = scratch / "rt_service";
  cfg.systems = {{"s1", SystemConfig::s1()}, {"s2", SystemConfig::s2()}};
  auto now = std::make_shared<std::int64_t>(0);
  Service service(cfg, b.topics, b.store, [now] { return *now; });
  using nlohmann::json;
  for (const auto& t : b.topics) {
    for (const std::string sys : {"s1", "s2"}) {
      const auto created = json::parse(
          service.create_session(json{{"system_id", sys}, {"topic_id", t.topic_id()}, {"user_id", "acc"}}.dump())
              .body);
      const std::string id = created["session_id"];
      service.rate(id, R"({"target":"initial","score":4})");
      for (int q = 0; q < 4; ++q) {
        *now += 20'000;
        service.query(id, json{{"query_text", created["suggestions"][q]}, {"query_type", "suggested"}}.dump());
        service.rate(id, json{{"target", "response"}, {"response_index", q}, {"score", 1 + q}}.dump());
      }
      *now += 200'000;
      const auto done = json::parse(service.finish(id, R"({"r3":4,"r4a":5,"r4b":4})").body);
      if (!done.value("accepted", false)) {
        ++bad;
        continue;
      }
      const auto original = parse_session_record(service.log(id).body);
      verify(original, done["log_path"].get<std::string>(), t.reference_tokens());
    }
  }
  return {bad == 0 && checked == 3 * static_cast<int>(b.topics.size()),
          std::to_string(checked) + " logs (simulated and service), " + std::to_string(bad) + " mismatches"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfse acceptance checks"};
  std::filesystem::path data;
  app.add_option("--data", data, "synthetic benchmark root (corpus/ and embeddings.txt)")->required();
  CLI11_PARSE(app, argc, argv);

  fixture::TempDir scratch("qfse-acceptance");
  std::unique_ptr<Bench> bench;
  auto need_bench = [&]() -> const Bench& {
    if (!bench) bench = std::make_unique<Bench>(load_bench(data));
    return *bench;
  };

  const std::vector<Check> checks{
      {"umux_lite_formula", 1, umux},
      {"rouge_oracle_equivalence", 10, rouge_oracle},
      {"recall_monotonicity", 30, [&] { return monotonicity(need_bench()); }},
      {"auc_oracle", 5, auc_oracle},
      {"aggregation_semantics", 1, aggregation},
      {"bound_ordering", 120, [&] { return bound_ordering(need_bench()); }},
      {"no_repeat_invariant", 60, [&] { return no_repeat(need_bench()); }},
      {"latency_budget", 120, [&] { return latency(scratch.path); }},
      {"determinism", 60, [&] { return determinism(need_bench(), scratch.path); }},
      {"log_round_trip", 30, [&] { return round_trip(need_bench(), scratch.path); }},
  };

  int failed = 0;
  for (const auto& c : checks) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = elapsed_ms(start) / 1000.0;
    const bool in_time = secs < c.budget;
    const bool pass = out.ok && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << " [" << fmt("%.2f", secs) << " s / budget " << c.budget
              << " s] " << out.detail << (in_time ? "" : " (over time budget)") << std::endl;
  }
  std::cout << (checks.size() - static_cast<std::size_t>(failed)) << "/" << checks.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
