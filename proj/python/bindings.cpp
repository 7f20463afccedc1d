// Python bindings for the core library.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qfse/engine.hpp"
#include "qfse/errors.hpp"
#include "qfse/evalkit.hpp"
#include "qfse/porter.hpp"
#include "qfse/report.hpp"
#include "qfse/rouge.hpp"
#include "qfse/simharness.hpp"
#include "qfse/synth.hpp"
#include "qfse/textproc.hpp"

namespace py = pybind11;
using namespace qfse;

namespace {

RecallCurve to_curve(const std::vector<std::pair<double, double>>& pts) {
  RecallCurve c;
  for (const auto& [x, y] : pts) c.points.push_back({x, y});
  return c;
}

std::vector<std::pair<double, double>> from_curve(const RecallCurve& c) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : c.points) out.emplace_back(p.length, p.score);
  return out;
}

// A live session over one topic, owning its corpus index and embeddings.
class PySession {
 public:
  PySession(const std::filesystem::path& topic_path, const std::filesystem::path& embeddings,
            const std::string& system, std::int64_t clock_start_ms)
      : tick_(std::make_shared<std::int64_t>(clock_start_ms)) {
    auto store = std::make_shared<const EmbeddingStore>(EmbeddingStore::load(embeddings));
    auto corpus = std::make_shared<const TopicCorpus>(load_topic(topic_path));
    SystemConfig cfg = system == "s1" ? SystemConfig::s1()
                       : system == "s2" ? SystemConfig::s2()
                                        : SystemConfig::from_json(system);
    auto index = TopicIndex::build(corpus, *store, cfg.pca_dim);
    auto tick = tick_;
    session_ = std::make_unique<Session>("py", index, store, cfg, [tick] { return *tick; });
  }

  std::string initial_text() const { return session_->initial().text; }
  int initial_word_count() const { return session_->initial().word_count; }
  std::vector<std::string> suggestions() const { return session_->suggestions(); }

  py::dict query(const std::string& text, const std::string& type) {
    *tick_ += 1000;
    const Interaction& it = session_->respond(text, parse_query_type(type));
    py::dict d;
    d["query_text"] = it.query_text;
    d["response_text"] = it.response_text();
    d["response_word_count"] = it.response_word_count;
    d["exhausted"] = it.exhausted;
    return d;
  }

  void rate_initial(int score) { session_->rate_initial(score); }
  void rate_response(std::size_t index, int score) { session_->rate_response(index, score); }
  std::string log_json(const std::string& user_id) const {
    return to_json_string(session_->to_record(user_id, SessionSource::Human));
  }

 private:
  std::shared_ptr<std::int64_t> tick_;
  std::unique_ptr<Session> session_;
};

}  // namespace

PYBIND11_MODULE(_qfse, m) {
  m.doc() = "Query-focused summarization exploration: text processing, ROUGE, sessions and evaluation";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<IngestError>(m, "IngestError", PyExc_OSError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("split_sentences", &split_sentences, py::arg("text"));
  m.def("tokenize", &tokenize, py::arg("text"), py::arg("drop_stopwords") = false);
  m.def("count_words", &count_words, py::arg("text"));
  m.def("porter_stem", &porter_stem, py::arg("word"));

  m.def(
      "rouge",
      [](const std::vector<std::string>& candidate, const std::vector<std::vector<std::string>>& references,
         const std::string& variant, bool stem) {
        const RougeScore s = rouge(candidate, references, parse_rouge_variant(variant), stem);
        return py::make_tuple(s.precision, s.recall, s.f1);
      },
      py::arg("candidate"), py::arg("references"), py::arg("variant") = "r1", py::arg("stem") = false,
      "Token-list ROUGE; returns (precision, recall, f1).");
  m.def(
      "rouge_text",
      [](const std::string& candidate, const std::vector<std::string>& references, const std::string& variant,
         bool stem) {
        const RougeScore s = rouge_text(candidate, references, parse_rouge_variant(variant), stem);
        return py::make_tuple(s.precision, s.recall, s.f1);
      },
      py::arg("candidate"), py::arg("references"), py::arg("variant") = "r1", py::arg("stem") = false);

  m.def("umux_lite", &umux_lite, py::arg("r4a"), py::arg("r4b"));
  m.def("aggregate", &aggregate, py::arg("values"), "Macro mean over (topic, value) pairs.");
  m.def(
      "interpolate", [](const std::vector<std::pair<double, double>>& c, double x) { return interpolate(to_curve(c), x); },
      py::arg("curve"), py::arg("x"));
  m.def(
      "auc",
      [](const std::vector<std::pair<double, double>>& c, double lo, double hi) { return auc(to_curve(c), lo, hi); },
      py::arg("curve"), py::arg("lo"), py::arg("hi"));
  m.def(
      "length_at_score",
      [](const std::vector<std::pair<double, double>>& c, double target) {
        return length_at_score(to_curve(c), target);
      },
      py::arg("curve"), py::arg("target"));
  m.def(
      "bootstrap_ci",
      [](const std::vector<double>& v, double level, int iters, std::uint64_t seed) {
        const Interval i = bootstrap_ci(v, level, iters, seed);
        return py::make_tuple(i.lo, i.hi);
      },
      py::arg("values"), py::arg("level") = 0.95, py::arg("iters") = 10000, py::arg("seed") = 0);
  m.def("pearson_r", &pearson_r, py::arg("xs"), py::arg("ys"));

  m.def(
      "recall_curve",
      [](const std::string& log_json, const std::vector<std::string>& references, const std::string& variant,
         bool f1) {
        std::vector<TokenList> refs;
        for (const auto& r : references) refs.push_back(tokenize(r));
        return from_curve(recall_curve(parse_session_record(log_json), refs, parse_rouge_variant(variant),
                                       f1 ? CurveMode::F1 : CurveMode::Recall));
      },
      py::arg("log_json"), py::arg("references"), py::arg("variant") = "r1", py::arg("f1") = false,
      "Recall (or F1) by word length for a session-log JSON document.");
  m.def(
      "normalize_log", [](const std::string& text) { return to_json_string(parse_session_record(text)); },
      py::arg("log_json"), "Validates a session log and returns its canonical serialization.");

  m.def(
      "generate_benchmark",
      [](const std::filesystem::path& out, const std::string& preset, std::uint64_t seed) {
        SynthOptions o;
        if (preset == "latency") {
          o = SynthOptions::latency();
        } else if (preset != "benchmark") {
          throw ArgumentError("preset must be benchmark or latency");
        }
        o.seed = seed;
        write_benchmark(generate_benchmark(o), out);
      },
      py::arg("out"), py::arg("preset") = "benchmark", py::arg("seed") = 2020);

  m.def(
      "simulate",
      [](const std::filesystem::path& corpus_root, const std::filesystem::path& embeddings,
         const std::string& system, const std::string& script, std::uint64_t seed,
         const std::filesystem::path& out_dir, int queries) {
        auto store = std::make_shared<const EmbeddingStore>(EmbeddingStore::load(embeddings));
        const SystemConfig cfg = system == "s1" ? SystemConfig::s1() : system == "s2" ? SystemConfig::s2()
                                                                                       : SystemConfig::from_json(system);
        const auto res = simulate_batch(load_corpus_root(corpus_root), store, cfg, parse_script_label(script), seed,
                                        out_dir, queries);
        std::vector<std::string> written;
        for (const auto& p : res.written) written.push_back(p.string());
        return py::make_tuple(written, res.errors);
      },
      py::arg("corpus_root"), py::arg("embeddings"), py::arg("system") = "s1", py::arg("script") = "sug",
      py::arg("seed") = 0, py::arg("out_dir") = "sim_logs", py::arg("queries") = 10,
      "Simulates every topic; returns (written paths, per-topic errors).");

  m.def(
      "evaluate",
      [](const std::filesystem::path& logs_dir, const std::filesystem::path& corpus_root,
         const std::filesystem::path& out, int bootstrap_iters, std::uint64_t seed) {
        std::map<std::string, std::vector<TokenList>> refs;
        for (const auto& t : load_corpus_root(corpus_root)) refs[t.topic_id()] = t.reference_tokens();
        ExperimentSpec spec;
        spec.bootstrap_iters = bootstrap_iters;
        spec.seed = seed;
        write_report(evaluate(load_session_logs(logs_dir), refs, spec), out);
        return summarize_report(out);
      },
      py::arg("logs_dir"), py::arg("corpus_root"), py::arg("out"), py::arg("bootstrap_iters") = 10000,
      py::arg("seed") = 0, "Writes the CSV report and returns its text summary.");

  py::class_<PySession>(m, "Session")
      .def(py::init<const std::filesystem::path&, const std::filesystem::path&, const std::string&, std::int64_t>(),
           py::arg("topic_path"), py::arg("embeddings"), py::arg("system") = "s1", py::arg("clock_start_ms") = 0)
      .def_property_readonly("initial_text", &PySession::initial_text)
      .def_property_readonly("initial_word_count", &PySession::initial_word_count)
      .def_property_readonly("suggestions", &PySession::suggestions)
      .def("query", &PySession::query, py::arg("text"), py::arg("query_type") = "free_text")
      .def("rate_initial", &PySession::rate_initial, py::arg("score"))
      .def("rate_response", &PySession::rate_response, py::arg("index"), py::arg("score"))
      .def("log_json", &PySession::log_json, py::arg("user_id") = "py");
}
