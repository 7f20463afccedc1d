#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qfse {

enum class QueryType { FreeText, Highlight, Suggested, Repeat };

std::string to_string(QueryType t);
/// Accepts "free_text", "highlight", "suggested", "repeat".
QueryType parse_query_type(std::string_view s);

enum class SessionSource { Human, Simulated };

struct InteractionRecord {
  std::string query_text;
  QueryType query_type = QueryType::FreeText;
  std::string response_text;
  int response_word_count = 0;
  std::optional<int> rating;  // usefulness rating of this response
  std::int64_t timestamp_ms = 0;
  std::int64_t latency_ms = 0;
};

struct RatingRecord {
  std::optional<int> r1;                 // initial summary informativeness
  std::vector<std::optional<int>> r2;    // per response
  std::optional<int> r3;                 // overall responsiveness
  std::optional<int> r4a;                // capabilities meet requirements
  std::optional<int> r4b;                // ease of use
};

/// One logged session: the initial summary followed by query/response rounds.
struct SessionRecord {
  std::string system_id;
  std::string topic_id;
  std::string user_id;
  SessionSource source = SessionSource::Human;
  std::string initial_text;
  std::vector<InteractionRecord> interactions;
  RatingRecord ratings;
};

/// Serializes to the session-log JSON document. Output is deterministic
/// (keys sorted, fixed indentation) so equal records give equal bytes.
std::string to_json_string(const SessionRecord& record);

/// Parses and validates a session-log document. Throws FormatError on schema
/// violations (missing fields, ratings outside 1..5, decreasing timestamps).
SessionRecord parse_session_record(std::string_view text);

SessionRecord load_session_record(const std::filesystem::path& path);
void save_session_record(const std::filesystem::path& path, const SessionRecord& record);

/// All `*.json` session logs in `dir`, in filename order.
std::vector<SessionRecord> load_session_logs(const std::filesystem::path& dir);

}  // namespace qfse
