#include "qfse/simharness.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

#include "qfse/errors.hpp"
#include "qfse/parallel.hpp"

namespace qfse {

std::string to_string(ScriptLabel label) {
  switch (label) {
    case ScriptLabel::Sug: return "sug";
    case ScriptLabel::Oracle: return "oracle";
    case ScriptLabel::Custom: return "custom";
  }
  return "custom";
}

ScriptLabel parse_script_label(std::string_view s) {
  if (s == "sug") return ScriptLabel::Sug;
  if (s == "oracle") return ScriptLabel::Oracle;
  if (s == "custom") return ScriptLabel::Custom;
  throw ArgumentError("unknown script: " + std::string(s));
}

std::string simulated_user_id(ScriptLabel label) { return "sim-" + to_string(label); }

QueryScript build_lsug(const TopicCorpus& corpus, const SystemConfig& config, int n) {
  SystemConfig c = config;
  c.num_suggestions = n;
  QueryScript script;
  script.label = ScriptLabel::Sug;
  script.queries = suggestions_for(corpus, c);
  script.short_script = static_cast<int>(script.queries.size()) < n;
  return script;
}

QueryScript build_oracle(const TopicCorpus& corpus, std::uint64_t seed, int n) {
  const auto& scus = corpus.scus();
  if (scus.empty()) throw ArgumentError("topic " + corpus.topic_id() + " has no SCU list");
  QueryScript script;
  script.label = ScriptLabel::Oracle;
  script.seed = seed;
  std::vector<std::size_t> idx(scus.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates with an explicit draw so results do not depend on
  // the standard library's distribution implementations.
  std::mt19937_64 rng(seed);
  const std::size_t take = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(n, 0)));
  for (std::size_t i = 0; i < take; ++i) {
    const std::uint64_t span = idx.size() - i;
    const std::size_t j = i + static_cast<std::size_t>(rng() % span);
    std::swap(idx[i], idx[j]);
    script.queries.push_back(scus[idx[i]]);
  }
  script.short_script = static_cast<int>(scus.size()) < n;
  return script;
}

SimulationResult run_simulation(std::shared_ptr<const TopicIndex> index,
                                std::shared_ptr<const EmbeddingStore> store,
                                const SystemConfig& config, const QueryScript& script) {
  auto tick = std::make_shared<std::int64_t>(0);
  Clock clock = [tick] { return *tick; };
  Session session("sim", std::move(index), std::move(store), config, clock);
  SimulationResult out;
  for (std::size_t i = 0; i < script.queries.size(); ++i) {
    *tick = static_cast<std::int64_t>(i + 1) * 1000;
    const QueryType type = script.label == ScriptLabel::Sug ? QueryType::Suggested : QueryType::FreeText;
    const Interaction& it = session.respond(script.queries[i], type);
    if (static_cast<int>(it.positions.size()) < config.response_sentences) out.exhausted = true;
  }
  out.record = session.to_record(simulated_user_id(script.label), SessionSource::Simulated);
  for (auto& ir : out.record.interactions) ir.latency_ms = 0;
  return out;
}

BatchResult simulate_batch(const std::vector<TopicCorpus>& topics,
                           std::shared_ptr<const EmbeddingStore> store, const SystemConfig& config,
                           ScriptLabel label, std::uint64_t seed,
                           const std::filesystem::path& out_dir, int queries) {
  if (label == ScriptLabel::Custom) throw ArgumentError("batch simulation needs the sug or oracle script");
  std::filesystem::create_directories(out_dir);
  std::vector<std::optional<std::filesystem::path>> written(topics.size());
  std::vector<std::string> errors(topics.size());
  parallel_for(topics.size(), [&](std::size_t i) {
    const TopicCorpus& t = topics[i];
    try {
      const QueryScript script = label == ScriptLabel::Sug ? build_lsug(t, config, queries)
                                                           : build_oracle(t, seed, queries);
      auto index = TopicIndex::build(std::make_shared<const TopicCorpus>(t), *store, config.pca_dim);
      const auto result = run_simulation(index, store, config, script);
      const auto path = out_dir / (config.system_id + "_" + t.topic_id() + "_" +
                                   simulated_user_id(label) + ".json");
      save_session_record(path, result.record);
      written[i] = path;
    } catch (const ArgumentError& e) {
      errors[i] = t.topic_id() + ": " + e.what();
    }
  });
  BatchResult out;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    if (written[i]) out.written.push_back(*written[i]);
    if (!errors[i].empty()) out.errors.push_back(errors[i]);
  }
  return out;
}

}  // namespace qfse
