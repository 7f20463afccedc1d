#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace qfse {

enum class RougeKind { R1, R2, RL, RSU };

struct RougeVariant {
  RougeKind kind = RougeKind::R1;
  int su_skip_distance = 4;  // max number of words between skip-bigram members
  bool include_unigrams_in_su = true;

  static RougeVariant r1() { return {RougeKind::R1}; }
  static RougeVariant r2() { return {RougeKind::R2}; }
  static RougeVariant rl() { return {RougeKind::RL}; }
  static RougeVariant su4() { return {RougeKind::RSU, 4, true}; }
};

/// Parses "r1", "r2", "rl", "rsu" / "su4" (case-insensitive).
RougeVariant parse_rouge_variant(std::string name);
std::string rouge_variant_name(const RougeVariant& v);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

using TokenList = std::vector<std::string>;

/// Scores `candidate` against each reference and averages precision and
/// recall over references; f1 is the harmonic mean of the averaged values.
/// With `stem`, both sides are Porter-stemmed first.
///
/// Throws ArgumentError when `references` is empty.
RougeScore rouge(std::span<const std::string> candidate, std::span<const TokenList> references,
                 const RougeVariant& variant, bool stem = false);

/// Tokenizes (stopwords kept) and calls rouge().
RougeScore rouge_text(const std::string& candidate, std::span<const std::string> references,
                      const RougeVariant& variant, bool stem = false);

/// Length of the longest common subsequence.
int lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Precomputed reference side for scoring many candidates against the same
/// references (evaluation of snapshot sequences).
class RougeScorer {
 public:
  RougeScorer(std::vector<TokenList> references, RougeVariant variant, bool stem);

  RougeScore score(std::span<const std::string> candidate) const;

 private:
  std::vector<unsigned> intern(std::span<const std::string> tokens) const;

  std::vector<std::vector<unsigned>> reference_ids_;
  std::unordered_map<std::string, unsigned> vocab_;
  RougeVariant variant_;
  bool stem_;
};

}  // namespace qfse
