#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qfse/embeddings.hpp"
#include "qfse/summarizer.hpp"
#include "qfse/synth.hpp"
#include "qfse/textproc.hpp"

namespace fixture {

inline qfse::TopicCorpus corpus(const std::vector<std::pair<std::string, std::string>>& docs,
                                const std::vector<std::string>& refs = {"reference text"},
                                const std::vector<std::string>& scus = {}, std::string id = "t1") {
  std::vector<qfse::Document> d;
  for (const auto& [doc_id, text] : docs) d.push_back(qfse::make_document(doc_id, text));
  std::vector<qfse::ReferenceSummary> r;
  for (std::size_t i = 0; i < refs.size(); ++i) r.push_back(qfse::make_reference("ref" + std::to_string(i), refs[i]));
  return qfse::TopicCorpus(std::move(id), std::move(d), std::move(r), scus);
}

/// Random vectors for every token of the corpus (and `extra` words).
inline std::shared_ptr<qfse::EmbeddingStore> random_store(const qfse::TopicCorpus& c, int dim,
                                                          std::uint64_t seed,
                                                          const std::vector<std::string>& extra = {}) {
  auto store = std::make_shared<qfse::EmbeddingStore>(dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto add = [&](const std::string& w) {
    if (store->lookup(w)) return;
    std::vector<float> v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = static_cast<float>(g(rng));
    store->insert(w, v);
  };
  for (const auto* s : c.sentences())
    for (const auto& t : s->tokens) add(t);
  for (const auto& w : extra) add(w);
  return store;
}

/// A small generated benchmark (in memory), shared by several tests.
inline const qfse::SynthBenchmark& small_bench() {
  static const qfse::SynthBenchmark bench = [] {
    qfse::SynthOptions o;
    o.topics = 2;
    o.docs_per_topic = 6;
    o.facts_per_topic = 10;
    o.filler_per_doc = 8;
    o.dim = 24;
    o.seed = 11;
    return qfse::generate_benchmark(o);
  }();
  return bench;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) {
    path = std::filesystem::temp_directory_path() /
           (name + "-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace fixture
