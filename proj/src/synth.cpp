#include "qfse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "qfse/errors.hpp"

namespace qfse {
namespace {

// Portable draws: the standard distributions differ between library vendors.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen() % n); }
  double normal() {
    // Box-Muller
    double u1 = uniform();
    while (u1 <= 0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * uniform());
  }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
};

const std::vector<std::string> kFillerWords = {
    "officials", "statement", "reporters", "committee", "spokesman", "government",
    "meeting",   "schedule",  "agency",    "announced", "weekly",    "regional",
    "council",   "morning",   "update",    "briefing",  "public",    "local",
    "residents", "community", "program",   "report",    "analysts",  "observers",
    "discussion", "series",   "session",   "comments",  "members",   "plans",
};

const std::vector<std::pair<std::string, std::string>> kStockBigrams = {
    {"press", "conference"}, {"news", "agency"},     {"government", "officials"},
    {"weekly", "briefing"},  {"council", "meeting"}, {"local", "residents"},
};

const std::vector<std::string> kFillerVerbs = {"discussed", "mentioned", "reviewed", "noted"};

const std::vector<std::string> kTemplateWords = {"according", "records", "reportedly",
                                                 "confirmed", "week", "later"};

class WordMaker {
 public:
  explicit WordMaker(Rng& rng) : rng_(rng) {}
  std::string make() {
    static const std::string cons = "bdfgklmnprstvz";
    static const std::string vows = "aeiou";
    for (;;) {
      std::string w;
      for (int i = 0; i < 3; ++i) {
        w.push_back(cons[rng_.below(cons.size())]);
        w.push_back(vows[rng_.below(vows.size())]);
      }
      if (!is_stopword(w) && used_.insert(w).second) return w;
    }
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

struct Fact {
  std::string e1, e2, act, o1, o2, place;
};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string fact_sentence(const Fact& f, int variant) {
  switch (variant % 4) {
    case 0: return "The " + f.e1 + " " + f.e2 + " " + f.act + " the " + f.o1 + " " + f.o2 + " near " + f.place + ".";
    case 1: return "Near " + capitalize(f.place) + ", the " + f.e1 + " " + f.e2 + " " + f.act + " the " + f.o1 + " " + f.o2 + ".";
    case 2: return "According to records, the " + f.e1 + " " + f.e2 + " reportedly " + f.act + " the " + f.o1 + " " + f.o2 + " at " + f.place + ".";
    default: return "It was confirmed that the " + f.e1 + " " + f.e2 + " " + f.act + " the " + f.o1 + " " + f.o2 + " in " + f.place + " later that week.";
  }
}

std::string filler_sentence(Rng& rng) {
  const auto& [b1, b2] = rng.pick(kStockBigrams);
  std::string s = "The " + b1 + " " + b2 + " " + rng.pick(kFillerVerbs) + " the " + rng.pick(kFillerWords) +
                  " and " + rng.pick(kFillerWords) + " of the " + rng.pick(kFillerWords) + " " +
                  rng.pick(kFillerWords) + ".";
  return s;
}

std::vector<float> noisy(const std::vector<double>& base, double scale, double noise, Rng& rng) {
  std::vector<float> v(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    v[i] = static_cast<float>(scale * base[i] + noise * rng.normal());
  }
  return v;
}

std::vector<double> unit_direction(int dim, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  double n = 0;
  for (auto& x : v) {
    x = rng.normal();
    n += x * x;
  }
  n = std::sqrt(n);
  for (auto& x : v) x /= n;
  return v;
}

}  // namespace

SynthBenchmark generate_benchmark(const SynthOptions& o) {
  if (o.topics < 1 || o.docs_per_topic < 1 || o.facts_per_topic < 1 || o.dim < 2 ||
      o.mentions_per_fact < 1 || o.references < 1 || o.filler_per_doc < 0) {
    throw ArgumentError("invalid synthetic benchmark options");
  }
  Rng rng(o.seed);
  WordMaker words(rng);
  SynthBenchmark bench;
  bench.embeddings = EmbeddingStore(o.dim);
  std::set<std::string> embedded;
  auto embed = [&](const std::string& w, std::vector<float> v) {
    if (embedded.insert(w).second) bench.embeddings.insert(w, std::move(v));
  };
  const std::vector<double> zero(static_cast<std::size_t>(o.dim), 0.0);

  // Shared vocabulary: filler words cluster around one direction, function
  // and template words are low-norm noise.
  const auto filler_dir = unit_direction(o.dim, rng);
  for (const auto& w : kFillerWords) embed(w, noisy(filler_dir, 1.0, 0.25, rng));
  for (const auto& [a, b] : kStockBigrams) {
    embed(a, noisy(filler_dir, 1.0, 0.25, rng));
    embed(b, noisy(filler_dir, 1.0, 0.25, rng));
  }
  for (const auto& w : kFillerVerbs) embed(w, noisy(filler_dir, 1.0, 0.25, rng));
  for (const auto& w : kTemplateWords) embed(w, noisy(zero, 0, 0.05, rng));
  for (const auto& w : stopword_list()) embed(w, noisy(zero, 0, 0.02, rng));

  for (int t = 0; t < o.topics; ++t) {
    char tid[32];
    std::snprintf(tid, sizeof tid, "topic%02d", t + 1);

    std::vector<Fact> facts;
    for (int f = 0; f < o.facts_per_topic; ++f) {
      Fact fact{words.make(), words.make(), words.make(), words.make(), words.make(), words.make()};
      const auto dir = unit_direction(o.dim, rng);
      for (const auto* w : {&fact.e1, &fact.e2, &fact.act, &fact.o1, &fact.o2, &fact.place}) {
        embed(*w, noisy(dir, 1.0, 0.2, rng));
      }
      facts.push_back(fact);
    }

    // Spread fact mentions over documents, each in a different phrasing.
    std::vector<std::vector<std::string>> doc_sentences(static_cast<std::size_t>(o.docs_per_topic));
    for (int f = 0; f < o.facts_per_topic; ++f) {
      for (int m = 0; m < o.mentions_per_fact; ++m) {
        const auto d = static_cast<std::size_t>((f + m * 3 + t) % o.docs_per_topic);
        doc_sentences[d].push_back(fact_sentence(facts[static_cast<std::size_t>(f)], f + m));
      }
    }
    std::vector<Document> docs;
    for (int d = 0; d < o.docs_per_topic; ++d) {
      auto sents = doc_sentences[static_cast<std::size_t>(d)];
      for (int k = 0; k < o.filler_per_doc; ++k) {
        const std::size_t at = rng.below(sents.size() + 1);
        sents.insert(sents.begin() + static_cast<std::ptrdiff_t>(at), filler_sentence(rng));
      }
      std::string raw;
      for (const auto& s : sents) {
        if (!raw.empty()) raw.push_back(' ');
        raw += s;
      }
      char did[32];
      std::snprintf(did, sizeof did, "doc%02d", d + 1);
      docs.push_back(make_document(did, raw + "\n"));
    }

    std::vector<ReferenceSummary> refs;
    for (int r = 0; r < o.references; ++r) {
      std::vector<std::size_t> order(facts.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
      const auto take = std::min<std::size_t>(order.size(), static_cast<std::size_t>(o.facts_per_reference));
      std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
      std::string text;
      for (std::size_t i = 0; i < take; ++i) {
        if (!text.empty()) text.push_back(' ');
        text += fact_sentence(facts[order[i]], 0);
      }
      refs.push_back(make_reference("ref" + std::to_string(r + 1), text + "\n"));
    }

    std::vector<std::string> scus;
    for (const auto& f : facts) {
      scus.push_back(f.e1 + " " + f.e2 + " " + f.act + " " + f.o1 + " " + f.o2);
    }
    bench.topics.emplace_back(tid, std::move(docs), std::move(refs), std::move(scus));
  }
  return bench;
}

SynthOptions SynthOptions::latency() {
  SynthOptions o;
  o.topics = 1;
  o.docs_per_topic = 25;
  o.facts_per_topic = 40;
  o.filler_per_doc = 19;
  o.dim = 300;
  return o;
}

void write_benchmark(const SynthBenchmark& bench, const std::filesystem::path& root) {
  for (const auto& t : bench.topics) save_topic_plain(t, root / "corpus" / t.topic_id());
  bench.embeddings.save(root / "embeddings.txt");
}

}  // namespace qfse
