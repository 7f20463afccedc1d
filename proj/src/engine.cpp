#include "qfse/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <numeric>

#include "json.hpp"
#include "qfse/errors.hpp"
#include "qfse/rouge.hpp"
#include "qfse/suggest.hpp"

namespace qfse {
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double lex_score(const TokenList& query, const SentenceVector& query_vec, const Sentence& s,
                 const Vector& sentence_vec) {
  const std::vector<TokenList> ref{s.tokens};
  const double cos = cosine(query_vec.values, sentence_vec);
  return (cos + 1) * (rouge(query, ref, RougeVariant::r1()).precision + 1) *
         (rouge(query, ref, RougeVariant::r2()).precision + 1) *
         (rouge(query, ref, RougeVariant::rl()).precision + 1);
}

void check_score(int score) {
  if (score < 1 || score > 5) throw ArgumentError("rating must be in 1..5");
}

}  // namespace

SystemConfig SystemConfig::s1() {
  SystemConfig c;
  c.system_id = "s1";
  c.initial = InitialAlgorithm::CL;
  c.responder = ResponderKind::SEM;
  c.suggester = SuggesterKind::FREQ;
  return c;
}

SystemConfig SystemConfig::s2() {
  SystemConfig c;
  c.system_id = "s2";
  c.initial = InitialAlgorithm::TR;
  c.responder = ResponderKind::LEX;
  c.suggester = SuggesterKind::TR;
  return c;
}

void SystemConfig::validate() const {
  if (system_id.empty()) throw ArgumentError("system_id must be nonempty");
  if (response_sentences < 1) throw ArgumentError("response_sentences must be >= 1");
  if (mmr_dissim < 0 || mmr_dissim > 1) throw ArgumentError("mmr_dissim must be in [0,1]");
  if (min_initial_words < 0) throw ArgumentError("min_initial_words must be >= 0");
  if (pca_dim < 1 || clusters < 1) throw ArgumentError("pca_dim and clusters must be >= 1");
  if (num_suggestions < 0) throw ArgumentError("num_suggestions must be >= 0");
}

SummarizerConfig SystemConfig::summarizer() const {
  return {pca_dim, clusters, dedup, min_initial_words};
}

SystemConfig SystemConfig::from_json(std::string_view text) {
  SystemConfig c;
  try {
    const json j = json::parse(text);
    c.system_id = j.value("system_id", c.system_id);
    const std::string initial = j.value("initial", std::string("CL"));
    if (initial == "CL") {
      c.initial = InitialAlgorithm::CL;
    } else if (initial == "TR") {
      c.initial = InitialAlgorithm::TR;
    } else {
      throw ArgumentError("initial must be CL or TR");
    }
    const std::string responder = j.value("responder", std::string("SEM"));
    if (responder == "SEM") {
      c.responder = ResponderKind::SEM;
    } else if (responder == "LEX") {
      c.responder = ResponderKind::LEX;
    } else {
      throw ArgumentError("responder must be SEM or LEX");
    }
    const std::string suggester = j.value("suggester", std::string("FREQ"));
    if (suggester == "FREQ") {
      c.suggester = SuggesterKind::FREQ;
    } else if (suggester == "TR") {
      c.suggester = SuggesterKind::TR;
    } else {
      throw ArgumentError("suggester must be FREQ or TR");
    }
    c.response_sentences = j.value("response_sentences", c.response_sentences);
    c.min_initial_words = j.value("min_initial_words", c.min_initial_words);
    c.mmr_dissim = j.value("mmr_dissim", c.mmr_dissim);
    c.seed = j.value("seed", c.seed);
    c.pca_dim = j.value("pca_dim", c.pca_dim);
    c.clusters = j.value("clusters", c.clusters);
    c.dedup = j.value("dedup", c.dedup);
    c.num_suggestions = j.value("num_suggestions", c.num_suggestions);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad system config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string SystemConfig::to_json() const {
  json j = {
      {"system_id", system_id},
      {"initial", initial == InitialAlgorithm::CL ? "CL" : "TR"},
      {"responder", responder == ResponderKind::SEM ? "SEM" : "LEX"},
      {"suggester", suggester == SuggesterKind::FREQ ? "FREQ" : "TR"},
      {"response_sentences", response_sentences},
      {"min_initial_words", min_initial_words},
      {"mmr_dissim", mmr_dissim},
      {"seed", seed},
      {"pca_dim", pca_dim},
      {"clusters", clusters},
      {"dedup", dedup},
      {"num_suggestions", num_suggestions},
  };
  return j.dump(2);
}

std::string Interaction::response_text() const {
  std::string out;
  for (const auto& s : response_sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

Clock system_clock_ms() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

std::vector<std::string> suggestions_for(const TopicCorpus& corpus, const SystemConfig& config) {
  return config.suggester == SuggesterKind::FREQ ? suggest_freq(corpus, config.num_suggestions)
                                                 : suggest_tr(corpus, config.num_suggestions);
}

Session::Session(std::string session_id, std::shared_ptr<const TopicIndex> index,
                 std::shared_ptr<const EmbeddingStore> store, SystemConfig config, Clock clock)
    : session_id_(std::move(session_id)),
      index_(std::move(index)),
      store_(std::move(store)),
      config_(std::move(config)),
      clock_(std::move(clock)) {
  if (!index_ || !store_) throw ArgumentError("session requires a topic index and embeddings");
  if (index_->size() == 0) throw ArgumentError("empty corpus");
  config_.validate();
  created_at_ = last_active_ = clock_();
  const auto cfg = config_.summarizer();
  initial_ = config_.initial == InitialAlgorithm::CL ? initial_summary_cl(*index_, cfg, config_.seed)
                                                     : initial_summary_tr(*index_, cfg);
  used_.assign(index_->size(), false);
  mark_used(initial_.positions);
  suggestions_ = suggestions_for(index_->corpus(), config_);
}

std::size_t Session::used_count() const {
  return static_cast<std::size_t>(std::count(used_.begin(), used_.end(), true));
}

std::vector<int> Session::unused_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < used_.size(); ++i) {
    if (!used_[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

void Session::mark_used(const std::vector<int>& positions) {
  for (int p : positions) used_[static_cast<std::size_t>(p)] = true;
}

Response Session::respond_sem(std::string_view query) {
  Response res;
  const auto qv = embed_tokens(tokenize(query), *store_);
  res.degenerate_query = qv.oov;
  auto candidates = unused_positions();
  if (candidates.empty()) {
    res.exhausted = true;
    return res;
  }
  std::vector<std::pair<double, int>> scored;
  scored.reserve(candidates.size());
  for (int p : candidates) {
    scored.emplace_back(cosine(qv.values, index_->embedding(static_cast<std::size_t>(p))), p);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (const auto& [score, p] : scored) {
    const auto& emb = index_->embedding(static_cast<std::size_t>(p));
    const bool diverse = std::all_of(res.positions.begin(), res.positions.end(), [&](int q) {
      return 1.0 - cosine(emb, index_->embedding(static_cast<std::size_t>(q))) > config_.mmr_dissim;
    });
    if (!diverse) continue;
    res.positions.push_back(p);
    if (static_cast<int>(res.positions.size()) == config_.response_sentences) break;
  }
  mark_used(res.positions);
  res.exhausted = static_cast<int>(res.positions.size()) < config_.response_sentences &&
                  used_count() == used_.size();
  return res;
}

double Session::lex_similarity(std::string_view query, int position) const {
  const auto q = tokenize(query);
  const auto qv = embed_tokens(q, *store_);
  const auto pos = static_cast<std::size_t>(position);
  return lex_score(q, qv, *index_->sentences()[pos], index_->embedding(pos));
}

Response Session::respond_lex(std::string_view query) {
  Response res;
  const auto q = tokenize(query);
  const auto qv = embed_tokens(q, *store_);
  res.degenerate_query = qv.oov;
  auto candidates = unused_positions();
  if (candidates.empty()) {
    res.exhausted = true;
    return res;
  }
  std::vector<std::pair<double, int>> scored;
  scored.reserve(candidates.size());
  for (int p : candidates) {
    const auto pos = static_cast<std::size_t>(p);
    scored.emplace_back(lex_score(q, qv, *index_->sentences()[pos], index_->embedding(pos)), p);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const std::size_t take = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(config_.response_sentences));
  for (std::size_t i = 0; i < take; ++i) res.positions.push_back(scored[i].second);
  mark_used(res.positions);
  res.exhausted = static_cast<int>(res.positions.size()) < config_.response_sentences;
  return res;
}

const Interaction& Session::respond(std::string_view query, QueryType type) {
  std::string text;
  if (type == QueryType::Repeat) {
    if (interactions_.empty()) throw StateError("repeat requires a previous query");
    text = interactions_.back().query_text;
  } else {
    text = trim(query);
    if (text.empty()) throw ArgumentError("query must be nonempty");
  }

  const auto start = std::chrono::steady_clock::now();
  Response res = config_.responder == ResponderKind::SEM ? respond_sem(text) : respond_lex(text);
  const auto elapsed = std::chrono::steady_clock::now() - start;

  Interaction it;
  it.query_text = std::move(text);
  it.query_type = type;
  it.positions = res.positions;
  for (int p : res.positions) {
    const Sentence& s = *index_->sentences()[static_cast<std::size_t>(p)];
    it.response_word_count += s.word_count;
    it.response_sentences.push_back(s);
  }
  it.exhausted = res.exhausted;
  it.degenerate_query = res.degenerate_query;
  it.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  it.timestamp_ms = last_active_ = clock_();
  interactions_.push_back(std::move(it));
  ratings_.r2.resize(interactions_.size());
  return interactions_.back();
}

void Session::rate_initial(int score) {
  check_score(score);
  ratings_.r1 = score;
}

void Session::rate_response(std::size_t index, int score) {
  if (index >= interactions_.size()) throw std::out_of_range("no such response");
  check_score(score);
  interactions_[index].rating = score;
  ratings_.r2.resize(interactions_.size());
  ratings_.r2[index] = score;
}

SessionRecord Session::to_record(const std::string& user_id, SessionSource source) const {
  SessionRecord r;
  r.system_id = config_.system_id;
  r.topic_id = topic_id();
  r.user_id = user_id;
  r.source = source;
  r.initial_text = initial_.text;
  for (const auto& it : interactions_) {
    InteractionRecord ir;
    ir.query_text = it.query_text;
    ir.query_type = it.query_type;
    ir.response_text = it.response_text();
    ir.response_word_count = it.response_word_count;
    ir.rating = it.rating;
    ir.timestamp_ms = it.timestamp_ms;
    ir.latency_ms = it.latency_ms;
    r.interactions.push_back(std::move(ir));
  }
  r.ratings = ratings_;
  r.ratings.r2.resize(interactions_.size());
  return r;
}

}  // namespace qfse
