#include "qfse/session_log.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qfse/errors.hpp"

namespace qfse {
using nlohmann::json;

namespace {

json opt_rating(const std::optional<int>& r) { return r ? json(*r) : json(nullptr); }

std::optional<int> read_rating(const json& j, const char* what) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_number_integer()) throw FormatError(std::string(what) + " must be an integer or null");
  const int v = j.get<int>();
  if (v < 1 || v > 5) throw FormatError(std::string(what) + " outside 1..5");
  return v;
}

std::optional<int> read_rating_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  return read_rating(*it, key);
}

}  // namespace

std::string to_string(QueryType t) {
  switch (t) {
    case QueryType::FreeText: return "free_text";
    case QueryType::Highlight: return "highlight";
    case QueryType::Suggested: return "suggested";
    case QueryType::Repeat: return "repeat";
  }
  return "free_text";
}

QueryType parse_query_type(std::string_view s) {
  if (s == "free_text") return QueryType::FreeText;
  if (s == "highlight") return QueryType::Highlight;
  if (s == "suggested") return QueryType::Suggested;
  if (s == "repeat") return QueryType::Repeat;
  throw ArgumentError("unknown query_type: " + std::string(s));
}

std::string to_json_string(const SessionRecord& r) {
  json j;
  j["system_id"] = r.system_id;
  j["topic_id"] = r.topic_id;
  j["user_id"] = r.user_id;
  j["source"] = r.source == SessionSource::Human ? "human" : "simulated";
  j["initial_text"] = r.initial_text;
  j["interactions"] = json::array();
  for (const auto& it : r.interactions) {
    j["interactions"].push_back({
        {"query_text", it.query_text},
        {"query_type", to_string(it.query_type)},
        {"response_text", it.response_text},
        {"response_word_count", it.response_word_count},
        {"rating", opt_rating(it.rating)},
        {"timestamp_ms", it.timestamp_ms},
        {"latency_ms", it.latency_ms},
    });
  }
  json r2 = json::array();
  for (const auto& v : r.ratings.r2) r2.push_back(opt_rating(v));
  j["ratings"] = {
      {"r1", opt_rating(r.ratings.r1)}, {"r2", r2},
      {"r3", opt_rating(r.ratings.r3)}, {"r4a", opt_rating(r.ratings.r4a)},
      {"r4b", opt_rating(r.ratings.r4b)},
  };
  return j.dump(2) + "\n";
}

SessionRecord parse_session_record(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("session log is not JSON: ") + e.what());
  }
  SessionRecord r;
  try {
    r.system_id = j.at("system_id").get<std::string>();
    r.topic_id = j.at("topic_id").get<std::string>();
    r.user_id = j.value("user_id", std::string());
    const std::string source = j.value("source", std::string("human"));
    if (source == "human") {
      r.source = SessionSource::Human;
    } else if (source == "simulated") {
      r.source = SessionSource::Simulated;
    } else {
      throw FormatError("unknown source: " + source);
    }
    r.initial_text = j.at("initial_text").get<std::string>();
    std::int64_t last_ts = INT64_MIN;
    for (const auto& ij : j.at("interactions")) {
      InteractionRecord it;
      it.query_text = ij.at("query_text").get<std::string>();
      it.query_type = parse_query_type(ij.at("query_type").get<std::string>());
      it.response_text = ij.at("response_text").get<std::string>();
      it.response_word_count = ij.at("response_word_count").get<int>();
      if (it.response_word_count < 0) throw FormatError("negative response_word_count");
      it.rating = read_rating(ij.value("rating", json(nullptr)), "rating");
      it.timestamp_ms = ij.value("timestamp_ms", std::int64_t{0});
      it.latency_ms = ij.value("latency_ms", std::int64_t{0});
      if (it.timestamp_ms < last_ts) throw FormatError("timestamps decrease");
      last_ts = it.timestamp_ms;
      r.interactions.push_back(std::move(it));
    }
    if (j.contains("ratings") && !j.at("ratings").is_null()) {
      const json& rj = j.at("ratings");
      r.ratings.r1 = read_rating_field(rj, "r1");
      if (rj.contains("r2") && !rj.at("r2").is_null()) {
        for (const auto& v : rj.at("r2")) r.ratings.r2.push_back(read_rating(v, "r2"));
      }
      r.ratings.r3 = read_rating_field(rj, "r3");
      r.ratings.r4a = read_rating_field(rj, "r4a");
      r.ratings.r4b = read_rating_field(rj, "r4b");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad session log: ") + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("bad session log: ") + e.what());
  }
  return r;
}

SessionRecord load_session_record(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_session_record(ss.str());
  } catch (const FormatError& e) {
    throw FormatError(path.filename().string() + ": " + e.what());
  }
}

void save_session_record(const std::filesystem::path& path, const SessionRecord& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << to_json_string(record);
}

std::vector<SessionRecord> load_session_logs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<SessionRecord> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_session_record(f));
  return out;
}

}  // namespace qfse
