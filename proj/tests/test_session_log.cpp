#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "qfse/errors.hpp"
#include "qfse/session_log.hpp"

using namespace qfse;

namespace {

SessionRecord sample() {
  SessionRecord r;
  r.system_id = "s2";
  r.topic_id = "topic01";
  r.user_id = "u7";
  r.initial_text = "Initial summary text. With two sentences.";
  for (int i = 0; i < 3; ++i) {
    InteractionRecord it;
    it.query_text = "q" + std::to_string(i);
    it.query_type = i == 0 ? QueryType::Suggested : (i == 1 ? QueryType::Highlight : QueryType::Repeat);
    it.response_text = "Response number " + std::to_string(i) + ".";
    it.response_word_count = 3;
    it.timestamp_ms = 1000 * (i + 1);
    it.latency_ms = 12;
    if (i == 1) it.rating = 4;
    r.interactions.push_back(it);
  }
  r.ratings.r1 = 5;
  r.ratings.r2 = {std::nullopt, 4, std::nullopt};
  r.ratings.r3 = 3;
  r.ratings.r4a = 4;
  return r;
}

}  // namespace

TEST_CASE("query type names") {
  for (auto t : {QueryType::FreeText, QueryType::Highlight, QueryType::Suggested, QueryType::Repeat})
    CHECK(parse_query_type(to_string(t)) == t);
  CHECK_THROWS_AS(parse_query_type("typed"), ArgumentError);
}

TEST_CASE("records round-trip exactly") {
  const auto r = sample();
  const std::string text = to_json_string(r);
  const auto back = parse_session_record(text);
  CHECK(to_json_string(back) == text);
  CHECK(back.user_id == "u7");
  CHECK(back.interactions[2].query_type == QueryType::Repeat);
  CHECK(back.interactions[1].rating == 4);
  CHECK_FALSE(back.ratings.r4b.has_value());
  CHECK(back.ratings.r2.size() == 3);

  fixture::TempDir dir("qfse-log");
  save_session_record(dir.path / "nested" / "a.json", r);
  CHECK(to_json_string(load_session_record(dir.path / "nested" / "a.json")) == text);
}

TEST_CASE("serialization is byte-stable") {
  CHECK(to_json_string(sample()) == to_json_string(sample()));
}

TEST_CASE("schema violations") {
  CHECK_THROWS_AS(parse_session_record("{"), FormatError);
  CHECK_THROWS_AS(parse_session_record(R"({"topic_id":"t","initial_text":"","interactions":[]})"), FormatError);

  auto bad = [](const std::string& from, const std::string& to) {
    std::string text = to_json_string(sample());
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    text.replace(at, from.size(), to);
    return text;
  };
  CHECK_THROWS_AS(parse_session_record(bad("\"r1\": 5", "\"r1\": 6")), FormatError);
  CHECK_THROWS_AS(parse_session_record(bad("\"rating\": 4", "\"rating\": 0")), FormatError);
  CHECK_THROWS_AS(parse_session_record(bad("\"timestamp_ms\": 3000", "\"timestamp_ms\": 10")), FormatError);
  CHECK_THROWS_AS(parse_session_record(bad("\"suggested\"", "\"typed\"")), FormatError);
  CHECK_THROWS_AS(parse_session_record(bad("\"human\"", "\"robot\"")), FormatError);
  CHECK_THROWS_AS(parse_session_record(bad("\"response_word_count\": 3", "\"response_word_count\": -1")),
                  FormatError);
}

TEST_CASE("directory loading is ordered and reports the bad file") {
  fixture::TempDir dir("qfse-logs");
  auto r = sample();
  r.user_id = "b";
  save_session_record(dir.path / "b.json", r);
  r.user_id = "a";
  save_session_record(dir.path / "a.json", r);
  std::ofstream(dir.path / "notes.txt") << "ignored";
  const auto logs = load_session_logs(dir.path);
  REQUIRE(logs.size() == 2);
  CHECK(logs[0].user_id == "a");
  CHECK(logs[1].user_id == "b");

  std::ofstream(dir.path / "c.json") << "[]";
  try {
    load_session_logs(dir.path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("c.json") != std::string::npos);
  }
  CHECK(load_session_logs(dir.path / "missing").empty());
}
