#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "qfse/embeddings.hpp"
#include "qfse/textproc.hpp"

namespace qfse {

/// Knobs for the generated benchmark. Each topic plants `facts` salient
/// statements, paraphrased across documents and padded with filler sentences
/// built around a few stock phrases. References restate the facts and SCUs
/// name one fact each.
struct SynthOptions {
  int topics = 5;
  int docs_per_topic = 10;
  int facts_per_topic = 12;
  int mentions_per_fact = 3;
  int filler_per_doc = 14;
  int references = 4;
  int facts_per_reference = 8;
  int dim = 50;
  std::uint64_t seed = 2020;

  /// One topic, 25 documents, about 600 sentences, 300-dimensional vectors.
  static SynthOptions latency();
};

struct SynthBenchmark {
  std::vector<TopicCorpus> topics;
  EmbeddingStore embeddings;
};

SynthBenchmark generate_benchmark(const SynthOptions& options);

/// Writes `<root>/corpus/<topic>/...` in plain-dir layout and
/// `<root>/embeddings.txt`.
void write_benchmark(const SynthBenchmark& bench, const std::filesystem::path& root);

}  // namespace qfse
