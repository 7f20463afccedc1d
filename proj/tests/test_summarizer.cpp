#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "qfse/errors.hpp"
#include "qfse/summarizer.hpp"
#include "qfse/textrank.hpp"

using namespace qfse;

namespace {
std::shared_ptr<const TopicIndex> index_of(const TopicCorpus& c, const EmbeddingStore& s, int pca = 20) {
  return TopicIndex::build(std::make_shared<const TopicCorpus>(c), s, pca);
}

void check_no_near_duplicates(const TopicIndex& idx, const InitialSummary& s, double dedup) {
  for (std::size_t i = 0; i < s.positions.size(); ++i)
    for (std::size_t j = i + 1; j < s.positions.size(); ++j) {
      const auto a = static_cast<std::size_t>(s.positions[i]);
      const auto b = static_cast<std::size_t>(s.positions[j]);
      CHECK(cosine(idx.reduced(a), idx.reduced(b)) < dedup);
    }
}

int longest_sentence(const TopicCorpus& c) {
  int m = 0;
  for (const auto* s : c.sentences()) m = std::max(m, s->word_count);
  return m;
}
}  // namespace

TEST_CASE("small corpus is exhausted and flagged short") {
  const auto c = fixture::corpus({{"d1", "Rain fell on the city. Rivers rose."}, {"d2", "Schools closed early."}});
  const auto store = fixture::random_store(c, 8, 1);
  const auto idx = index_of(c, *store);
  for (const auto& s : {initial_summary_cl(*idx, {}, 0), initial_summary_tr(*idx, {})}) {
    CHECK(s.short_summary);
    CHECK(s.positions.size() == 3);
    CHECK(s.word_count == 10);
  }
}

TEST_CASE("verbatim duplicates appear once") {
  const auto c = fixture::corpus({{"d1", "Rain fell on the city. Rivers rose quickly."},
                                  {"d2", "Rain fell on the city. Schools closed early."}});
  const auto store = fixture::random_store(c, 8, 2);
  const auto idx = index_of(c, *store);
  for (const auto& s : {initial_summary_cl(*idx, {}, 0), initial_summary_tr(*idx, {})}) {
    std::set<std::string> texts;
    for (int p : s.positions) texts.insert(idx->sentences()[static_cast<std::size_t>(p)]->text);
    CHECK(texts.size() == s.positions.size());
    CHECK(s.positions.size() == 3);
  }
}

TEST_CASE("summaries on the generated benchmark reach the minimum length without near duplicates") {
  const auto& bench = fixture::small_bench();
  for (const auto& topic : bench.topics) {
    const auto idx = index_of(topic, bench.embeddings);
    const SummarizerConfig cfg;
    for (const auto& s : {initial_summary_cl(*idx, cfg, 3), initial_summary_tr(*idx, cfg)}) {
      CHECK_FALSE(s.short_summary);
      CHECK(s.word_count >= 75);
      CHECK(s.word_count < 75 + longest_sentence(topic));
      check_no_near_duplicates(*idx, s, cfg.dedup);
      CHECK(s.sentence_keys.size() == s.positions.size());
    }
  }
}

TEST_CASE("summaries are deterministic") {
  const auto& bench = fixture::small_bench();
  const auto idx = index_of(bench.topics[1], bench.embeddings);
  CHECK(initial_summary_cl(*idx, {}, 9).positions == initial_summary_cl(*idx, {}, 9).positions);
  CHECK(initial_summary_tr(*idx, {}).positions == initial_summary_tr(*idx, {}).positions);
}

TEST_CASE("TR summary follows TextRank order minus dedup skips") {
  const auto& bench = fixture::small_bench();
  const auto& topic = bench.topics[0];
  const auto idx = index_of(topic, bench.embeddings);
  const auto s = initial_summary_tr(*idx, {});
  const auto ranked = textrank_sentences(topic);
  std::vector<int> rank_pos;
  for (const auto& r : ranked) rank_pos.push_back(r.position);
  std::size_t cursor = 0;
  for (int p : s.positions) {
    auto it = std::find(rank_pos.begin() + static_cast<std::ptrdiff_t>(cursor), rank_pos.end(), p);
    REQUIRE(it != rank_pos.end());
    cursor = static_cast<std::size_t>(it - rank_pos.begin()) + 1;
  }
}

TEST_CASE("single sentence corpus") {
  const auto c = fixture::corpus({{"d", "Just one sentence about floods."}});
  const auto store = fixture::random_store(c, 4, 1);
  const auto idx = index_of(c, *store);
  CHECK(initial_summary_tr(*idx, {}).text == "Just one sentence about floods.");
  CHECK(initial_summary_cl(*idx, {}, 0).text == "Just one sentence about floods.");
}

TEST_CASE("OOV sentences are not used by the clustering summary") {
  const auto c = fixture::corpus({{"d", "Known words here. Zzqx yyqx wwqx. Known again here."}});
  EmbeddingStore store(3);
  store.insert("known", {1, 0, 0});
  store.insert("words", {0, 1, 0});
  store.insert("here", {0, 0, 1});
  store.insert("again", {1, 1, 0});
  const auto idx = index_of(c, store);
  CHECK(idx->oov(1));
  const auto s = initial_summary_cl(*idx, {}, 0);
  CHECK(std::find(s.positions.begin(), s.positions.end(), 1) == s.positions.end());

  EmbeddingStore empty(3);
  const auto none = index_of(c, empty);
  CHECK_THROWS_AS(initial_summary_cl(*none, {}, 0), ArgumentError);
}

TEST_CASE("representativeness is the mean stopword-free corpus frequency") {
  const auto c = fixture::corpus({{"d", "Storm storm coast. The storm."}});
  const auto store = fixture::random_store(c, 4, 1);
  const auto idx = index_of(c, *store);
  // storm appears 3 times, coast once.
  CHECK(idx->representativeness(0) == doctest::Approx((3 + 3 + 1) / 3.0));
  CHECK(idx->representativeness(1) == doctest::Approx(3.0));
}
