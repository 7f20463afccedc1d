#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "qfse/engine.hpp"

namespace qfse {

enum class ScriptLabel { Sug, Oracle, Custom };

std::string to_string(ScriptLabel label);
/// "sug", "oracle" or "custom".
ScriptLabel parse_script_label(std::string_view s);

struct QueryScript {
  ScriptLabel label = ScriptLabel::Custom;
  std::vector<std::string> queries;
  std::uint64_t seed = 0;
  bool short_script = false;  // fewer queries than requested were available
};

/// The system's own suggestions, in order.
QueryScript build_lsug(const TopicCorpus& corpus, const SystemConfig& config, int n = 10);

/// Seeded uniform sample of `n` SCUs without replacement. Takes all of them
/// (and sets short_script) when fewer exist. Throws ArgumentError when the
/// corpus has no SCUs.
QueryScript build_oracle(const TopicCorpus& corpus, std::uint64_t seed, int n = 10);

struct SimulationResult {
  SessionRecord record;
  bool exhausted = false;  // some response came back short or empty
};

/// Runs the script against a fresh session. Interaction i is stamped i*1000 ms
/// and latencies are recorded as 0 so that output is reproducible.
SimulationResult run_simulation(std::shared_ptr<const TopicIndex> index,
                                std::shared_ptr<const EmbeddingStore> store,
                                const SystemConfig& config, const QueryScript& script);

struct BatchResult {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> errors;  // "topic: message" for topics that could not run
};

/// Simulates one script per topic and writes
/// `<out_dir>/<system>_<topic>_sim-<script>.json`. Topics run in parallel; a
/// topic that fails (e.g. no SCUs for an oracle script) is reported in
/// `errors` and the rest still run.
BatchResult simulate_batch(const std::vector<TopicCorpus>& topics,
                           std::shared_ptr<const EmbeddingStore> store, const SystemConfig& config,
                           ScriptLabel label, std::uint64_t seed,
                           const std::filesystem::path& out_dir, int queries = 10);

/// user_id used in simulated logs: "sim-sug", "sim-oracle" or "sim-custom".
std::string simulated_user_id(ScriptLabel label);

}  // namespace qfse
