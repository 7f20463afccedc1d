#include "qfse/summarizer.hpp"

#include <algorithm>
#include <numeric>

#include "qfse/errors.hpp"
#include "qfse/textrank.hpp"

namespace qfse {

std::shared_ptr<const TopicIndex> TopicIndex::build(std::shared_ptr<const TopicCorpus> corpus,
                                                    const EmbeddingStore& store, int pca_dim) {
  if (!corpus) throw ArgumentError("TopicIndex: null corpus");
  auto index = std::make_shared<TopicIndex>();
  index->corpus_ = std::move(corpus);
  const auto& sents = index->corpus_->sentences();
  index->embeddings_.reserve(sents.size());
  std::vector<Vector> eligible;
  std::vector<std::size_t> eligible_pos;
  for (std::size_t i = 0; i < sents.size(); ++i) {
    auto sv = sentence_embedding(*sents[i], store);
    index->oov_.push_back(sv.oov);
    if (!sv.oov) {
      eligible.push_back(sv.values);
      eligible_pos.push_back(i);
    }
    index->embeddings_.push_back(std::move(sv.values));
  }
  index->reduced_.assign(sents.size(), Vector(static_cast<std::size_t>(pca_dim), 0.0));
  if (!eligible.empty()) {
    auto reduced = pca_reduce(eligible, pca_dim);
    for (std::size_t e = 0; e < eligible_pos.size(); ++e) {
      index->reduced_[eligible_pos[e]] = std::move(reduced[e]);
    }
  }
  index->frequency_ = word_frequency(*index->corpus_, /*drop_stopwords=*/true);
  return index;
}

double TopicIndex::representativeness(std::size_t pos) const {
  double sum = 0;
  int n = 0;
  for (const auto& t : sentences()[pos]->tokens) {
    if (is_stopword(t)) continue;
    auto it = frequency_.find(t);
    sum += it == frequency_.end() ? 0 : it->second;
    ++n;
  }
  return n ? sum / n : 0.0;
}

namespace {

class SummaryBuilder {
 public:
  SummaryBuilder(const TopicIndex& index, const SummarizerConfig& cfg) : index_(index), cfg_(cfg) {}

  bool full() const { return out_.word_count >= cfg_.min_words; }

  // Adds the sentence unless it repeats a selected one. Returns true if added.
  bool offer(std::size_t pos) {
    const Sentence& s = *index_.sentences()[pos];
    for (int sel : out_.positions) {
      const auto p = static_cast<std::size_t>(sel);
      if (index_.sentences()[p]->tokens == s.tokens) return false;
      if (!index_.oov(pos) && !index_.oov(p) &&
          cosine(index_.reduced(pos), index_.reduced(p)) >= cfg_.dedup) {
        return false;
      }
    }
    out_.positions.push_back(static_cast<int>(pos));
    out_.sentence_keys.push_back(s.key());
    if (!out_.text.empty()) out_.text.push_back(' ');
    out_.text += s.text;
    out_.word_count += s.word_count;
    return true;
  }

  InitialSummary finish() {
    out_.short_summary = !full();
    return std::move(out_);
  }

 private:
  const TopicIndex& index_;
  const SummarizerConfig& cfg_;
  InitialSummary out_;
};

}  // namespace

InitialSummary initial_summary_cl(const TopicIndex& index, const SummarizerConfig& cfg,
                                  std::uint64_t seed) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!index.oov(i)) eligible.push_back(i);
  }
  if (eligible.empty()) throw ArgumentError("initial_summary_cl: no embeddable sentences");

  std::vector<Vector> points;
  points.reserve(eligible.size());
  for (std::size_t pos : eligible) points.push_back(index.reduced(pos));
  const ClusterModel model = kmeans(points, std::min<int>(cfg.k, static_cast<int>(points.size())), seed);

  // Members of each cluster, best representative first.
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(model.k));
  for (std::size_t e = 0; e < eligible.size(); ++e) {
    members[static_cast<std::size_t>(model.assignments[e])].push_back(eligible[e]);
  }
  for (auto& m : members) {
    std::stable_sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
      return index.representativeness(a) > index.representativeness(b);
    });
  }

  SummaryBuilder builder(index, cfg);
  std::size_t longest = 0;
  for (const auto& m : members) longest = std::max(longest, m.size());
  for (std::size_t round = 0; round < longest && !builder.full(); ++round) {
    for (int c : model.cluster_order) {
      const auto& m = members[static_cast<std::size_t>(c)];
      if (round >= m.size()) continue;
      builder.offer(m[round]);
      if (builder.full()) break;
    }
  }
  return builder.finish();
}

InitialSummary initial_summary_tr(const TopicIndex& index, const SummarizerConfig& cfg) {
  if (index.size() == 0) throw ArgumentError("initial_summary_tr: empty corpus");
  SummaryBuilder builder(index, cfg);
  for (const auto& r : textrank_sentences(index.corpus())) {
    if (builder.full()) break;
    builder.offer(static_cast<std::size_t>(r.position));
  }
  return builder.finish();
}

}  // namespace qfse
