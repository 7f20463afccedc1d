#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qfse {

/// Identifies a sentence inside a topic: (document id, 0-based position).
struct SentenceKey {
  std::string doc_id;
  int index = 0;

  auto operator<=>(const SentenceKey&) const = default;
  bool operator==(const SentenceKey&) const = default;
};

struct Sentence {
  std::string doc_id;
  int index = 0;
  std::string text;
  std::vector<std::string> tokens;  // lowercase, stopwords kept
  int word_count = 0;               // whitespace words of `text`

  SentenceKey key() const { return {doc_id, index}; }
};

struct Document {
  std::string doc_id;
  std::string raw_text;
  std::vector<Sentence> sentences;
};

struct ReferenceSummary {
  std::string name;
  std::string text;
  std::vector<std::string> tokens;
};

/// A multi-document topic with its reference summaries and optional SCU list.
///
/// Documents are sorted by doc_id, so the flat sentence order returned by
/// `sentences()` coincides with the (doc_id, index) order used for tie-breaks.
class TopicCorpus {
 public:
  TopicCorpus() = default;
  TopicCorpus(std::string topic_id, std::vector<Document> documents,
              std::vector<ReferenceSummary> references, std::vector<std::string> scus);

  const std::string& topic_id() const { return topic_id_; }
  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<ReferenceSummary>& references() const { return references_; }
  const std::vector<std::string>& scus() const { return scus_; }

  /// All sentences in canonical order.
  const std::vector<const Sentence*>& sentences() const { return flat_; }

  /// False when the corpus has no reference summaries; evaluation rejects it.
  bool eval_usable() const { return !references_.empty(); }

  /// Token lists of all references.
  std::vector<std::vector<std::string>> reference_tokens() const;

  TopicCorpus(const TopicCorpus& other);
  TopicCorpus& operator=(const TopicCorpus& other);
  TopicCorpus(TopicCorpus&&) noexcept = default;
  TopicCorpus& operator=(TopicCorpus&&) noexcept = default;

 private:
  void reindex();

  std::string topic_id_;
  std::vector<Document> documents_;
  std::vector<ReferenceSummary> references_;
  std::vector<std::string> scus_;
  std::vector<const Sentence*> flat_;
};

enum class CorpusFormat { PlainDir, Json };

/// Rule-based sentence segmentation on terminal punctuation with an
/// abbreviation guard. Output sentences are trimmed and never empty.
std::vector<std::string> split_sentences(std::string_view raw);

/// Lowercase, punctuation-stripped word tokens with possessive "'s" removed.
std::vector<std::string> tokenize(std::string_view text, bool drop_stopwords = false);

/// Number of whitespace-separated words.
int count_words(std::string_view text);

bool is_stopword(std::string_view token);

/// The pinned English stopword list.
const std::vector<std::string>& stopword_list();

/// Builds a document by segmenting and tokenizing `raw_text`. Sentences that
/// tokenize to nothing (e.g. "...") are dropped; indices stay contiguous.
Document make_document(std::string doc_id, std::string raw_text);

ReferenceSummary make_reference(std::string name, std::string text);

/// Loads a topic. Plain-dir layout: `docs/*.txt`, `refs/*.txt`, optional
/// `scus.json` (array of strings). JSON layout:
/// {"topic_id", "documents":[{"doc_id","text"}], "references":[str], "scus":[str]}.
TopicCorpus load_topic(const std::filesystem::path& path, CorpusFormat format);

/// Loads a topic guessing the format from the path (".json" file or directory).
TopicCorpus load_topic(const std::filesystem::path& path);

/// Loads every topic under `root`: subdirectories in plain-dir layout and
/// `*.json` files. Sorted by topic id.
std::vector<TopicCorpus> load_corpus_root(const std::filesystem::path& root);

/// Writes `corpus` in plain-dir layout under `dir` (created if needed).
void save_topic_plain(const TopicCorpus& corpus, const std::filesystem::path& dir);

/// Token counts over all document sentences.
std::map<std::string, int> word_frequency(const TopicCorpus& corpus, bool drop_stopwords);

}  // namespace qfse
