#include "qfse/textrank.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace qfse {
namespace {

constexpr int kCooccurrenceWindow = 3;

bool has_letter(const std::string& t) {
  return std::any_of(t.begin(), t.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
  });
}

bool is_candidate_word(const std::string& t) { return !is_stopword(t) && has_letter(t); }

}  // namespace

PageRankResult pagerank(const WeightedGraph& graph, double damping, double tol, int max_iters) {
  PageRankResult res;
  const std::size_t n = graph.size();
  if (n == 0) return res;
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : graph[i]) out_weight[i] += w;
  }
  const double nd = static_cast<double>(n);
  std::vector<double> pr(n, 1.0 / nd);
  std::vector<double> next(n);
  for (int it = 0; it < max_iters; ++it) {
    double dangling = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out_weight[i] <= 0) dangling += pr[i];
    }
    const double base = (1.0 - damping) / nd + damping * dangling / nd;
    std::fill(next.begin(), next.end(), base);
    for (std::size_t j = 0; j < n; ++j) {
      if (out_weight[j] <= 0) continue;
      const double share = damping * pr[j] / out_weight[j];
      for (const auto& [i, w] : graph[j]) next[static_cast<std::size_t>(i)] += share * w;
    }
    double delta = 0;
    for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - pr[i]);
    pr.swap(next);
    res.iterations = it + 1;
    if (delta < tol) {
      res.converged = true;
      break;
    }
  }
  res.scores = std::move(pr);
  return res;
}

double textrank_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  const double denom = std::log(static_cast<double>(a.size())) + std::log(static_cast<double>(b.size()));
  if (denom <= 0) return 0.0;
  std::vector<std::string> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  std::vector<std::string> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / denom;
}

std::vector<std::string> content_tokens(const Sentence& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) {
    if (!is_stopword(t)) out.push_back(t);
  }
  return out;
}

RankedSentences textrank_sentences(const TopicCorpus& corpus, double damping, double tol,
                                   int max_iters) {
  const auto& sents = corpus.sentences();
  const std::size_t n = sents.size();

  // Interned, sorted distinct word ids per sentence plus raw content length.
  std::unordered_map<std::string, int> vocab;
  std::vector<std::vector<int>> ids(n);
  std::vector<double> log_len(n, 0.0);
  std::vector<std::size_t> len(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto toks = content_tokens(*sents[i]);
    len[i] = toks.size();
    log_len[i] = toks.empty() ? 0.0 : std::log(static_cast<double>(toks.size()));
    for (auto& t : toks) ids[i].push_back(vocab.try_emplace(t, static_cast<int>(vocab.size())).first->second);
    std::sort(ids[i].begin(), ids[i].end());
    ids[i].erase(std::unique(ids[i].begin(), ids[i].end()), ids[i].end());
  }

  WeightedGraph graph(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (len[i] == 0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (len[j] == 0) continue;
      const double denom = log_len[i] + log_len[j];
      if (denom <= 0) continue;
      std::size_t a = 0, b = 0;
      int common = 0;
      while (a < ids[i].size() && b < ids[j].size()) {
        if (ids[i][a] < ids[j][b]) {
          ++a;
        } else if (ids[i][a] > ids[j][b]) {
          ++b;
        } else {
          ++common;
          ++a;
          ++b;
        }
      }
      if (common == 0) continue;
      const double w = common / denom;
      graph[i].emplace_back(static_cast<int>(j), w);
      graph[j].emplace_back(static_cast<int>(i), w);
    }
  }

  const auto pr = pagerank(graph, damping, tol, max_iters);
  RankedSentences ranked;
  ranked.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ranked.push_back({sents[i]->key(), static_cast<int>(i), pr.scores[i]});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedSentence& a, const RankedSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position < b.position;
  });
  return ranked;
}

std::vector<ScoredPhrase> textrank_scored_phrases(const TopicCorpus& corpus, int top_n) {
  std::unordered_map<std::string, int> vocab;
  std::vector<std::string> words;
  auto intern = [&](const std::string& t) {
    auto [it, inserted] = vocab.try_emplace(t, static_cast<int>(words.size()));
    if (inserted) words.push_back(t);
    return it->second;
  };

  std::map<std::pair<int, int>, double> edges;
  for (const Sentence* s : corpus.sentences()) {
    std::vector<int> filtered;
    for (const auto& t : s->tokens) {
      if (is_candidate_word(t)) filtered.push_back(intern(t));
    }
    for (std::size_t i = 0; i < filtered.size(); ++i) {
      for (std::size_t j = i + 1; j < filtered.size() && j - i < kCooccurrenceWindow; ++j) {
        if (filtered[i] == filtered[j]) continue;
        const auto key = std::minmax(filtered[i], filtered[j]);
        edges[{key.first, key.second}] += 1.0;
      }
    }
  }
  if (words.empty()) return {};

  WeightedGraph graph(words.size());
  for (const auto& [key, w] : edges) {
    graph[static_cast<std::size_t>(key.first)].emplace_back(key.second, w);
    graph[static_cast<std::size_t>(key.second)].emplace_back(key.first, w);
  }
  const auto pr = pagerank(graph);

  std::vector<int> order(words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = pr.scores[static_cast<std::size_t>(a)];
    const double sb = pr.scores[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    return words[static_cast<std::size_t>(a)] < words[static_cast<std::size_t>(b)];
  });
  const std::size_t keep = (words.size() + 2) / 3;
  std::vector<bool> keyword(words.size(), false);
  for (std::size_t i = 0; i < keep; ++i) keyword[static_cast<std::size_t>(order[i])] = true;

  std::map<std::string, double> phrases;
  auto flush = [&](std::vector<int>& run) {
    if (run.empty()) return;
    std::string text;
    double score = 0;
    for (int id : run) {
      if (!text.empty()) text.push_back(' ');
      text += words[static_cast<std::size_t>(id)];
      score += pr.scores[static_cast<std::size_t>(id)];
    }
    phrases.emplace(std::move(text), score);
    run.clear();
  };
  for (const Sentence* s : corpus.sentences()) {
    std::vector<int> run;
    for (const auto& t : s->tokens) {
      auto it = vocab.find(t);
      if (is_candidate_word(t) && it != vocab.end() && keyword[static_cast<std::size_t>(it->second)]) {
        run.push_back(it->second);
      } else {
        flush(run);
      }
    }
    flush(run);
  }

  std::vector<ScoredPhrase> out;
  out.reserve(phrases.size());
  for (auto& [text, score] : phrases) out.push_back({text, score});
  std::stable_sort(out.begin(), out.end(), [](const ScoredPhrase& a, const ScoredPhrase& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.text < b.text;
  });
  if (top_n >= 0 && out.size() > static_cast<std::size_t>(top_n)) out.resize(static_cast<std::size_t>(top_n));
  return out;
}

std::vector<std::string> textrank_phrases(const TopicCorpus& corpus, int top_n) {
  std::vector<std::string> out;
  for (auto& p : textrank_scored_phrases(corpus, top_n)) out.push_back(std::move(p.text));
  return out;
}

}  // namespace qfse
