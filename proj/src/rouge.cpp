#include "qfse/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>

#include "qfse/errors.hpp"
#include "qfse/porter.hpp"
#include "qfse/textproc.hpp"

namespace qfse {
namespace {

constexpr unsigned kUnknown = 0x7FFFFFFFu;
constexpr std::uint64_t kUnigramTag = 1ull << 63;

using UnitCounts = std::unordered_map<std::uint64_t, int>;

struct Units {
  UnitCounts counts;
  int total = 0;
};

std::uint64_t pair_key(unsigned a, unsigned b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

Units make_units(const std::vector<unsigned>& ids, const RougeVariant& v) {
  Units u;
  auto add = [&](std::uint64_t k) {
    ++u.counts[k];
    ++u.total;
  };
  const std::size_t n = ids.size();
  switch (v.kind) {
    case RougeKind::R1:
      for (unsigned id : ids) add(id);
      break;
    case RougeKind::R2:
      for (std::size_t i = 0; i + 1 < n; ++i) add(pair_key(ids[i], ids[i + 1]));
      break;
    case RougeKind::RSU: {
      const std::size_t reach = static_cast<std::size_t>(v.su_skip_distance) + 1;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n && j - i <= reach; ++j) add(pair_key(ids[i], ids[j]));
      }
      if (v.include_unigrams_in_su) {
        for (unsigned id : ids) add(kUnigramTag | id);
      }
      break;
    }
    case RougeKind::RL:
      break;
  }
  return u;
}

int clipped_overlap(const Units& cand, const Units& ref) {
  int overlap = 0;
  const Units& small = cand.counts.size() <= ref.counts.size() ? cand : ref;
  const Units& large = &small == &cand ? ref : cand;
  for (const auto& [k, c] : small.counts) {
    auto it = large.counts.find(k);
    if (it != large.counts.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

int lcs_ids(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<int> prev(b.size() + 1, 0);
  std::vector<int> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double ratio(int num, int den) { return den > 0 ? static_cast<double>(num) / den : 0.0; }

void check_variant(const RougeVariant& v) {
  if (v.kind == RougeKind::RSU && v.su_skip_distance < 1) {
    throw ArgumentError("su_skip_distance must be >= 1");
  }
}

}  // namespace

RougeVariant parse_rouge_variant(std::string name) {
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (name == "r1" || name == "rouge-1" || name == "rouge1") return RougeVariant::r1();
  if (name == "r2" || name == "rouge-2" || name == "rouge2") return RougeVariant::r2();
  if (name == "rl" || name == "rouge-l" || name == "rougel") return RougeVariant::rl();
  if (name == "rsu" || name == "su4" || name == "rsu4" || name == "rouge-su4") return RougeVariant::su4();
  throw ArgumentError("unknown ROUGE variant: " + name);
}

std::string rouge_variant_name(const RougeVariant& v) {
  switch (v.kind) {
    case RougeKind::R1: return "R1";
    case RougeKind::R2: return "R2";
    case RougeKind::RL: return "RL";
    case RougeKind::RSU: return "RSU";
  }
  return "?";
}

RougeScorer::RougeScorer(std::vector<TokenList> references, RougeVariant variant, bool stem)
    : variant_(variant), stem_(stem) {
  if (references.empty()) throw ArgumentError("rouge requires at least one reference");
  check_variant(variant);
  for (const auto& ref : references) {
    std::vector<unsigned> ids;
    ids.reserve(ref.size());
    for (const auto& tok : ref) {
      std::string t = stem_ ? porter_stem(tok) : tok;
      auto [it, inserted] = vocab_.try_emplace(std::move(t), static_cast<unsigned>(vocab_.size()));
      ids.push_back(it->second);
    }
    reference_ids_.push_back(std::move(ids));
  }
}

std::vector<unsigned> RougeScorer::intern(std::span<const std::string> tokens) const {
  std::vector<unsigned> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto it = vocab_.find(stem_ ? porter_stem(tok) : tok);
    ids.push_back(it == vocab_.end() ? kUnknown : it->second);
  }
  return ids;
}

RougeScore RougeScorer::score(std::span<const std::string> candidate) const {
  RougeScore out;
  if (candidate.empty()) return out;
  const auto cand = intern(candidate);
  double p_sum = 0;
  double r_sum = 0;
  if (variant_.kind == RougeKind::RL) {
    for (const auto& ref : reference_ids_) {
      const int l = lcs_ids(cand, ref);
      p_sum += ratio(l, static_cast<int>(cand.size()));
      r_sum += ratio(l, static_cast<int>(ref.size()));
    }
  } else {
    const Units cu = make_units(cand, variant_);
    for (const auto& ref : reference_ids_) {
      const Units ru = make_units(ref, variant_);
      const int overlap = clipped_overlap(cu, ru);
      p_sum += ratio(overlap, cu.total);
      r_sum += ratio(overlap, ru.total);
    }
  }
  const double n = static_cast<double>(reference_ids_.size());
  out.precision = p_sum / n;
  out.recall = r_sum / n;
  out.f1 = out.precision + out.recall > 0
               ? 2 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

RougeScore rouge(std::span<const std::string> candidate, std::span<const TokenList> references,
                 const RougeVariant& variant, bool stem) {
  return RougeScorer(std::vector<TokenList>(references.begin(), references.end()), variant, stem)
      .score(candidate);
}

RougeScore rouge_text(const std::string& candidate, std::span<const std::string> references,
                      const RougeVariant& variant, bool stem) {
  std::vector<TokenList> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(tokenize(r));
  const auto cand = tokenize(candidate);
  return rouge(cand, refs, variant, stem);
}

int lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::unordered_map<std::string, unsigned> vocab;
  auto ids = [&](std::span<const std::string> toks) {
    std::vector<unsigned> out;
    for (const auto& t : toks) {
      out.push_back(vocab.try_emplace(t, static_cast<unsigned>(vocab.size())).first->second);
    }
    return out;
  };
  return lcs_ids(ids(a), ids(b));
}

}  // namespace qfse
