#include "qfse/suggest.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "qfse/textrank.hpp"

namespace qfse {

int levenshtein(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1);
  std::vector<int> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<NgramCount> ranked_ngrams(const TopicCorpus& corpus) {
  std::map<std::string, int> bigrams;
  std::map<std::string, int> trigrams;
  std::map<std::string, std::vector<std::string>> trigram_parts;
  auto usable = [](const std::string& t) {
    return !is_stopword(t) && std::any_of(t.begin(), t.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
    });
  };
  for (const Sentence* s : corpus.sentences()) {
    const auto& t = s->tokens;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      if (!usable(t[i]) || !usable(t[i + 1])) continue;
      const std::string bi = t[i] + " " + t[i + 1];
      ++bigrams[bi];
      if (i + 2 < t.size() && usable(t[i + 2])) {
        const std::string tri = bi + " " + t[i + 2];
        if (++trigrams[tri] == 1) {
          trigram_parts[tri] = {bi, t[i + 1] + " " + t[i + 2]};
        }
      }
    }
  }

  std::map<std::string, bool> subsumed;
  for (const auto& [tri, count] : trigrams) {
    for (const auto& bi : trigram_parts[tri]) {
      if (bigrams[bi] == count) subsumed[bi] = true;
    }
  }

  std::vector<NgramCount> out;
  for (const auto& [text, count] : trigrams) out.push_back({text, 3, count});
  for (const auto& [text, count] : bigrams) {
    if (!subsumed.count(text)) out.push_back({text, 2, count});
  }
  std::sort(out.begin(), out.end(), [](const NgramCount& a, const NgramCount& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.n != b.n) return a.n > b.n;
    return a.text < b.text;
  });
  return out;
}

std::vector<std::string> suggest_freq(const TopicCorpus& corpus, int top_n) {
  std::vector<std::string> out;
  if (top_n <= 0) return out;
  for (const auto& cand : ranked_ngrams(corpus)) {
    const bool near_dup = std::any_of(out.begin(), out.end(), [&](const std::string& e) {
      return levenshtein(cand.text, e) < 2;
    });
    if (near_dup) continue;
    out.push_back(cand.text);
    if (static_cast<int>(out.size()) == top_n) break;
  }
  return out;
}

std::vector<std::string> suggest_tr(const TopicCorpus& corpus, int top_n) {
  return textrank_phrases(corpus, top_n);
}

}  // namespace qfse
