#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qfse/textproc.hpp"

namespace qfse {

/// Static word vectors keyed by lowercase token.
///
/// Text format: one `token v1 ... vD` line per word. A leading word2vec-style
/// header line `<count> <dim>` is accepted and skipped.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(int dim) : dim_(dim) {}

  static EmbeddingStore load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  /// Lookup after lowercasing; nullopt-like empty span for OOV tokens.
  std::optional<std::span<const float>> lookup(std::string_view token) const;

  /// Inserts (or replaces) a vector; its length must equal dim().
  void insert(std::string token, std::vector<float> vec);

  /// Tokens in insertion order.
  const std::vector<std::string>& words() const { return order_; }

 private:
  int dim_ = 0;
  std::unordered_map<std::string, std::vector<float>> vectors_;
  std::vector<std::string> order_;
};

struct SentenceVector {
  std::vector<double> values;
  bool oov = false;  // true when no token was in vocabulary (values all zero)
};

/// Mean of in-vocabulary token vectors; OOV tokens are skipped.
SentenceVector embed_tokens(std::span<const std::string> tokens, const EmbeddingStore& store);

/// Sentence representation: the mean over its tokens.
inline SentenceVector sentence_embedding(const Sentence& s, const EmbeddingStore& store) {
  return embed_tokens(s.tokens, store);
}

/// Cosine similarity; 0 when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace qfse
