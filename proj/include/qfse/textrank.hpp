#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qfse/textproc.hpp"

namespace qfse {

/// Weighted undirected graph as adjacency lists of (neighbor, weight).
using WeightedGraph = std::vector<std::vector<std::pair<int, double>>>;

struct PageRankResult {
  std::vector<double> scores;  // sums to 1
  int iterations = 0;
  bool converged = false;
};

/// Power-iteration PageRank on a weighted graph. Transition mass of a node
/// is split by edge weight; nodes without edges spread their mass uniformly.
/// Stops when the L1 change drops below `tol` or after `max_iters` steps.
PageRankResult pagerank(const WeightedGraph& graph, double damping = 0.85, double tol = 1e-6,
                        int max_iters = 100);

/// TextRank sentence similarity: distinct shared words over
/// log|a| + log|b|, 0 when the denominator is not positive.
double textrank_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct RankedSentence {
  SentenceKey key;
  int position = 0;  // index into corpus.sentences()
  double score = 0.0;
};

/// Sentences ordered by score descending, ties by (doc_id, index).
using RankedSentences = std::vector<RankedSentence>;

/// Content (non-stopword) tokens of a sentence, as used by the graphs.
std::vector<std::string> content_tokens(const Sentence& s);

RankedSentences textrank_sentences(const TopicCorpus& corpus, double damping = 0.85,
                                   double tol = 1e-6, int max_iters = 100);

struct ScoredPhrase {
  std::string text;
  double score = 0.0;
};

/// TextRank keyphrases: co-occurrence graph over stopword-free tokens
/// (window 3), adjacent top-third words merged into phrases scored by the
/// sum of member scores.
std::vector<ScoredPhrase> textrank_scored_phrases(const TopicCorpus& corpus, int top_n);

std::vector<std::string> textrank_phrases(const TopicCorpus& corpus, int top_n = 10);

}  // namespace qfse
