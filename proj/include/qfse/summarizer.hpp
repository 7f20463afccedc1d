#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qfse/clustering.hpp"
#include "qfse/embeddings.hpp"
#include "qfse/textproc.hpp"

namespace qfse {

struct SummarizerConfig {
  int pca_dim = 20;
  int k = 30;
  double dedup = 0.95;  // cosine at or above which a candidate is a repeat
  int min_words = 75;
};

/// Per-topic precomputation shared by the summarizers and query responders:
/// averaged word-vector sentence representations, their PCA reduction, and
/// stopword-free corpus word frequencies. Immutable once built.
class TopicIndex {
 public:
  static std::shared_ptr<const TopicIndex> build(std::shared_ptr<const TopicCorpus> corpus,
                                                 const EmbeddingStore& store, int pca_dim = 20);

  const TopicCorpus& corpus() const { return *corpus_; }
  std::shared_ptr<const TopicCorpus> corpus_ptr() const { return corpus_; }
  const std::vector<const Sentence*>& sentences() const { return corpus_->sentences(); }
  std::size_t size() const { return embeddings_.size(); }

  const Vector& embedding(std::size_t pos) const { return embeddings_[pos]; }
  bool oov(std::size_t pos) const { return oov_[pos]; }
  /// Reduced-space vector; all zeros for OOV sentences.
  const Vector& reduced(std::size_t pos) const { return reduced_[pos]; }
  const std::map<std::string, int>& content_frequency() const { return frequency_; }

  /// Mean corpus frequency of the sentence's non-stopword tokens.
  double representativeness(std::size_t pos) const;

 private:
  std::shared_ptr<const TopicCorpus> corpus_;
  std::vector<Vector> embeddings_;
  std::vector<bool> oov_;
  std::vector<Vector> reduced_;
  std::map<std::string, int> frequency_;
};

struct InitialSummary {
  std::vector<SentenceKey> sentence_keys;
  std::vector<int> positions;  // into corpus.sentences()
  std::string text;
  int word_count = 0;
  bool short_summary = false;  // source exhausted before min_words
};

/// Clustering-based summary: k-means over reduced sentence vectors, clusters
/// visited largest first, each represented by its most word-frequent sentence;
/// later passes take the next-best member of each cluster.
InitialSummary initial_summary_cl(const TopicIndex& index, const SummarizerConfig& cfg,
                                  std::uint64_t seed);

/// TextRank summary: sentences in rank order with the same redundancy skip.
InitialSummary initial_summary_tr(const TopicIndex& index, const SummarizerConfig& cfg);

}  // namespace qfse
