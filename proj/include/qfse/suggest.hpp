#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qfse/textproc.hpp"

namespace qfse {

/// Character-level edit distance (insert/delete/substitute, unit cost).
int levenshtein(std::string_view a, std::string_view b);

struct NgramCount {
  std::string text;
  int n = 0;
  int count = 0;
};

/// Stopword-free bigrams and trigrams (contiguous in the token stream, never
/// crossing a stopword or sentence boundary), ranked by frequency. A bigram
/// is dropped when a trigram containing it has the same frequency; at equal
/// frequency trigrams rank before bigrams, then lexicographic.
std::vector<NgramCount> ranked_ngrams(const TopicCorpus& corpus);

/// Frequent-n-gram suggestions: greedy over ranked_ngrams(), skipping any
/// candidate within edit distance < 2 of an already emitted phrase.
std::vector<std::string> suggest_freq(const TopicCorpus& corpus, int top_n = 10);

/// TextRank keyphrase suggestions.
std::vector<std::string> suggest_tr(const TopicCorpus& corpus, int top_n = 10);

}  // namespace qfse
