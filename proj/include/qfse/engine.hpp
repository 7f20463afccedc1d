#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qfse/embeddings.hpp"
#include "qfse/session_log.hpp"
#include "qfse/summarizer.hpp"

namespace qfse {

enum class InitialAlgorithm { CL, TR };
enum class ResponderKind { SEM, LEX };
enum class SuggesterKind { FREQ, TR };

/// Selects the (initial summarizer, query responder, suggester) triple and
/// its hyperparameters.
struct SystemConfig {
  std::string system_id = "s1";
  InitialAlgorithm initial = InitialAlgorithm::CL;
  ResponderKind responder = ResponderKind::SEM;
  SuggesterKind suggester = SuggesterKind::FREQ;
  int response_sentences = 2;
  int min_initial_words = 75;
  double mmr_dissim = 0.05;
  std::uint64_t seed = 0;
  int pca_dim = 20;
  int clusters = 30;
  double dedup = 0.95;
  int num_suggestions = 10;

  /// Clustering summary, semantic responder, frequent n-gram suggestions.
  static SystemConfig s1();
  /// TextRank summary, lexical responder, TextRank phrase suggestions.
  static SystemConfig s2();

  /// Throws ArgumentError when an invariant is violated.
  void validate() const;
  SummarizerConfig summarizer() const;

  /// JSON form: {"system_id", "initial": "CL"|"TR", "responder": "SEM"|"LEX",
  /// "suggester": "FREQ"|"TR", ...numeric fields}. Missing fields keep defaults.
  static SystemConfig from_json(std::string_view text);
  std::string to_json() const;
};

/// Outcome of a responder call.
struct Response {
  std::vector<int> positions;   // into corpus.sentences(), in output order
  bool exhausted = false;       // corpus ran out of unused sentences
  bool degenerate_query = false;  // query had no in-vocabulary token
};

struct Interaction {
  std::string query_text;
  QueryType query_type = QueryType::FreeText;
  std::vector<Sentence> response_sentences;
  std::vector<int> positions;
  int response_word_count = 0;
  std::optional<int> rating;
  std::int64_t latency_ms = 0;
  std::int64_t timestamp_ms = 0;
  bool exhausted = false;
  bool degenerate_query = false;

  std::string response_text() const;
};

/// Milliseconds since epoch. Injectable for tests and simulation.
using Clock = std::function<std::int64_t()>;
Clock system_clock_ms();

/// A live session. Holds the set of sentences already shown; no sentence is
/// ever output twice. Not thread-safe: callers serialize access per session.
class Session {
 public:
  /// Builds σ₀ per config.initial, marks its sentences used and precomputes
  /// the suggestion list.
  Session(std::string session_id, std::shared_ptr<const TopicIndex> index,
          std::shared_ptr<const EmbeddingStore> store, SystemConfig config,
          Clock clock = system_clock_ms());

  const std::string& session_id() const { return session_id_; }
  const SystemConfig& config() const { return config_; }
  const TopicIndex& index() const { return *index_; }
  const std::string& topic_id() const { return index_->corpus().topic_id(); }
  const InitialSummary& initial() const { return initial_; }
  const std::vector<std::string>& suggestions() const { return suggestions_; }
  const std::vector<Interaction>& interactions() const { return interactions_; }
  std::int64_t created_at_ms() const { return created_at_; }
  std::int64_t last_active_ms() const { return last_active_; }

  bool is_used(int position) const { return used_[static_cast<std::size_t>(position)]; }
  std::size_t used_count() const;

  /// Cosine ranking of unused sentences against the averaged query vector,
  /// accepting a candidate only if its dissimilarity to every sentence already
  /// accepted in this response exceeds config.mmr_dissim.
  Response respond_sem(std::string_view query);

  /// Ranks unused sentences by
  /// (cos + 1) * (R1 precision + 1) * (R2 precision + 1) * (RL precision + 1)
  /// with the query as ROUGE candidate and the sentence as reference.
  Response respond_lex(std::string_view query);

  /// Full interaction round. Highlight and suggested queries behave as free
  /// text; repeat reissues the previous query text. Throws StateError for a
  /// repeat without history and ArgumentError for an empty query.
  const Interaction& respond(std::string_view query, QueryType type);

  /// Score of one sentence under the lexical responder (exposed for tests).
  double lex_similarity(std::string_view query, int position) const;

  RatingRecord& ratings() { return ratings_; }
  const RatingRecord& ratings() const { return ratings_; }
  /// Throws ArgumentError for scores outside 1..5, std::out_of_range for a bad index.
  void rate_initial(int score);
  void rate_response(std::size_t index, int score);

  SessionRecord to_record(const std::string& user_id, SessionSource source) const;

 private:
  std::vector<int> unused_positions() const;
  void mark_used(const std::vector<int>& positions);

  std::string session_id_;
  std::shared_ptr<const TopicIndex> index_;
  std::shared_ptr<const EmbeddingStore> store_;
  SystemConfig config_;
  Clock clock_;
  InitialSummary initial_;
  std::vector<std::string> suggestions_;
  std::vector<bool> used_;
  std::vector<Interaction> interactions_;
  RatingRecord ratings_;
  std::int64_t created_at_ = 0;
  std::int64_t last_active_ = 0;
};

/// Suggestion list for a topic per the configured suggester.
std::vector<std::string> suggestions_for(const TopicCorpus& corpus, const SystemConfig& config);

}  // namespace qfse
