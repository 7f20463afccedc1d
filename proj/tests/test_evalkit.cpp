#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qfse/errors.hpp"
#include "qfse/evalkit.hpp"
#include "qfse/textproc.hpp"

using namespace qfse;
using doctest::Approx;

namespace {

std::string words(int n, const std::string& w = "filler") {
  std::string out;
  for (int i = 0; i < n; ++i) out += (i ? " " : "") + w + std::to_string(i);
  return out;
}

SessionRecord record_with(const std::string& initial, const std::vector<std::string>& responses) {
  SessionRecord r;
  r.system_id = "s1";
  r.topic_id = "t";
  r.initial_text = initial;
  std::int64_t ts = 0;
  for (const auto& text : responses) {
    InteractionRecord it;
    it.query_text = "q";
    it.response_text = text;
    it.response_word_count = count_words(text);
    it.timestamp_ms = ts += 1000;
    r.interactions.push_back(it);
  }
  return r;
}

RecallCurve curve(std::vector<std::pair<double, double>> pts) {
  RecallCurve c;
  for (auto [x, y] : pts) c.points.push_back({x, y});
  return c;
}

}  // namespace

TEST_CASE("snapshot lengths are additive") {
  const auto r = record_with(words(50), {words(20, "a"), words(30, "b")});
  const auto s = snapshots(r);
  REQUIRE(s.size() == 3);
  CHECK(s[0].length == 50);
  CHECK(s[1].length == 70);
  CHECK(s[2].length == 100);
  CHECK(count_words(s[2].text) == 100);

  const auto only = snapshots(record_with(words(12), {}));
  REQUIRE(only.size() == 1);
  CHECK(only[0].length == 12);
}

TEST_CASE("recall curves") {
  const std::string ref = "Storms flooded the northern coast. Residents fled inland.";
  const std::vector<TokenList> refs{tokenize(ref)};
  const auto exact = recall_curve(record_with(ref, {}), refs, RougeVariant::r1(), CurveMode::Recall);
  CHECK(exact.points.back().score == Approx(1.0));
  CHECK_THROWS_AS(recall_curve(record_with(ref, {}), {}, RougeVariant::r1(), CurveMode::Recall),
                  ArgumentError);

  const auto r = record_with("Storms came.", {"The northern coast flooded.", "", "Residents fled inland quickly."});
  const auto c = recall_curve(r, refs, RougeVariant::r2(), CurveMode::Recall);
  CHECK(c.points.size() == 3);  // the empty response adds no point
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    CHECK(c.points[i].length > c.points[i - 1].length);
    CHECK(c.points[i].score >= c.points[i - 1].score);
  }
  const auto f = recall_curve(r, refs, RougeVariant::r1(), CurveMode::F1);
  CHECK(f.points.size() == 3);
}

TEST_CASE("interpolation clamps and hits knots") {
  const auto c = curve({{0, 0}, {100, 0.5}});
  CHECK(interpolate(c, 50) == Approx(0.25));
  CHECK(interpolate(c, 150) == 0.5);
  CHECK(interpolate(c, -5) == 0.0);
  const auto k = curve({{10, 0.1}, {20, 0.37}, {30, 0.4}});
  CHECK(interpolate(k, 20) == 0.37);
  CHECK(score_at_length(k, 10) == 0.1);
  CHECK(score_at_length(k, 350) == 0.4);
  CHECK_THROWS_AS(interpolate(RecallCurve{}, 1), ArgumentError);
}

TEST_CASE("area under curve") {
  CHECK(auc(curve({{105, 0.4}, {333, 0.4}}), 105, 333) == Approx(91.2));
  CHECK(auc(curve({{105, 0}, {333, 1}}), 105, 333) == Approx(114));
  CHECK_THROWS_AS(auc(curve({{0, 0}, {1, 1}}), 5, 5), ArgumentError);
  // Clamped tails count as rectangles.
  CHECK(auc(curve({{10, 1}, {20, 1}}), 0, 30) == Approx(30));
}

TEST_CASE("area matches a midpoint Riemann sum and is additive") {
  std::mt19937_64 rng(42);
  // Spans divide 10000, so every integer knot falls on a cell boundary and
  // the midpoint sum is exact for the piecewise-linear curve.
  const std::vector<int> spans{100, 125, 200, 250, 400, 500, 625, 1000};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<double, double>> pts;
    double x = static_cast<double>(rng() % 50);
    const int n = 2 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      pts.emplace_back(x, static_cast<double>(rng() % 1000) / 1000.0);
      x += 1 + static_cast<double>(rng() % 120);
    }
    const double lo = static_cast<double>(rng() % 200);
    const double hi = lo + spans[rng() % spans.size()];
    const auto c = curve(pts);
    CHECK(std::abs(auc(c, lo, hi) - oracle::riemann(pts, lo, hi, 10000)) < 1e-6);
    const double mid = lo + static_cast<double>(rng() % static_cast<std::uint64_t>(hi - lo - 1)) + 0.5;
    CHECK(std::abs(auc(c, lo, mid) + auc(c, mid, hi) - auc(c, lo, hi)) < 1e-9);
  }
}

TEST_CASE("length at score") {
  const auto c = curve({{100, 0.2}, {218, 0.37}, {300, 0.5}});
  CHECK(length_at_score(c, 0.37) == 218.0);
  CHECK_FALSE(length_at_score(c, 0.51).has_value());
  CHECK(length_at_score(c, 0) == 100.0);
  CHECK(*length_at_score(c, 0.435) == Approx(259));
}

TEST_CASE("averaged curves") {
  const auto a = curve({{0, 0}, {100, 1}});
  const auto avg_same = average_curve({a, a}, 0, 100);
  REQUIRE(avg_same.points.size() == 11);
  for (const auto& p : avg_same.points) CHECK(p.score == Approx(interpolate(a, p.length)));

  const auto lo = curve({{50, 0.2}, {200, 0.2}});
  const auto hi = curve({{80, 0.4}, {150, 0.4}});
  const auto mix = average_curve({lo, hi});
  CHECK(mix.points.front().length == 80);
  CHECK(mix.points.back().length == 150);
  for (const auto& p : mix.points) CHECK(p.score == Approx(0.3));

  const auto odd = average_curve({a}, 0, 95);
  CHECK(odd.points.back().length == 95);
  CHECK(odd.points.size() == 11);
  CHECK_THROWS_AS(intersection_range({curve({{0, 0}, {10, 1}}), curve({{20, 0}, {30, 1}})}), ArgumentError);
}

TEST_CASE("macro aggregation") {
  CHECK(aggregate({{"A", 1}, {"A", 3}, {"B", 4}}) == Approx(3.0));
  CHECK(aggregate({{"A", 1}, {"A", 2}, {"A", 6}}) == Approx(3.0));
  CHECK(aggregate({{"A", 1}, {"B", 2}, {"A", 3}, {"B", 6}}) == Approx(3.0));
  CHECK_THROWS_AS(aggregate({}), ArgumentError);
}

TEST_CASE("UMUX-Lite") {
  CHECK(std::abs(umux_lite(3.81, 4.51) - 74.2) <= 0.1);
  CHECK(umux_lite(3.81, 4.51) == Approx(74.25));
  CHECK(umux_lite(1, 1) == Approx(22.9));
  CHECK(umux_lite(5, 5) == Approx(87.9));
  CHECK_THROWS_AS(umux_lite(0, 3), ArgumentError);
  CHECK_THROWS_AS(umux_lite(3, 5.5), ArgumentError);
}

TEST_CASE("rating aggregation") {
  std::vector<SessionRecord> rs;
  for (int i = 0; i < 4; ++i) {
    auto r = record_with("x", {"a b", "c d"});
    r.topic_id = i < 2 ? "t1" : "t2";
    r.ratings.r1 = 3;
    r.ratings.r2 = {3, 3};
    r.ratings.r3 = 3;
    r.ratings.r4a = 3;
    r.ratings.r4b = 3;
    rs.push_back(r);
  }
  rs[3].ratings.r3.reset();
  const auto rows = aggregate_ratings(rs);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(rows[i].mean == Approx(3.0));
    CHECK(rows[i].stddev == 0.0);
  }
  CHECK(rows[2].metric == "responsiveness");
  CHECK(rows[2].n_excluded == 1);
  CHECK(rows[2].n_sessions == 3);
  CHECK(rows[5].mean == Approx(umux_lite(3, 3)));

  // Per-interaction ratings stand in when the r2 list is absent.
  auto legacy = record_with("x", {"a", "b"});
  legacy.interactions[0].rating = 2;
  legacy.interactions[1].rating = 4;
  CHECK(aggregate_ratings({legacy})[1].mean == Approx(3.0));
  CHECK(sample_stddev({1, 2, 3, 4}) == Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("Pearson correlation") {
  CHECK(*pearson_r({1, 2, 3}, {2, 4, 6}) == Approx(1.0));
  CHECK(*pearson_r({1, 2, 3}, {3, 2, 1}) == Approx(-1.0));
  // Hand computation: sxy = 6, sxx = 10, syy = 6.
  CHECK(*pearson_r({1, 2, 3, 4, 5}, {2, 4, 5, 4, 5}) == Approx(6.0 / std::sqrt(60.0)));
  CHECK_FALSE(pearson_r({1, 1, 1}, {1, 2, 3}).has_value());
  CHECK_THROWS_AS(pearson_r({1, 2}, {1}), ArgumentError);
}

TEST_CASE("recall gain pairs") {
  const std::vector<TokenList> refs{tokenize("alpha beta gamma delta")};
  auto r = record_with("alpha", {"beta", "zeta", "gamma delta"});
  r.ratings.r2 = {5, 1, std::nullopt};
  const auto pairs = recall_gain_rating_pairs(r, refs);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].first == Approx(1.0));
  CHECK(pairs[0].second == 5);
  CHECK(pairs[1].first == Approx(0.0));
  CHECK(pairs[1].second == 1);
}

TEST_CASE("bootstrap intervals") {
  const auto flat = bootstrap_ci({2.5, 2.5, 2.5}, 0.95, 500, 1);
  CHECK(flat.lo == 2.5);
  CHECK(flat.hi == 2.5);
  const std::vector<double> v{1, 4, 2, 8, 5, 7};
  const auto a = bootstrap_ci(v, 0.95, 2000, 9);
  const auto b = bootstrap_ci(v, 0.95, 2000, 9);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
  CHECK(a.lo < mean(v));
  CHECK(a.hi > mean(v));
  CHECK_THROWS_AS(bootstrap_ci({}, 0.95, 10, 0), ArgumentError);
  CHECK_THROWS_AS(bootstrap_ci(v, 1.0, 10, 0), ArgumentError);
}

TEST_CASE("bootstrap coverage on standard normal samples") {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> g;
  const int experiments = 300;
  int covered = 0;
  for (int e = 0; e < experiments; ++e) {
    std::vector<double> xs(100);
    for (auto& x : xs) x = g(rng);
    const auto ci = bootstrap_ci(xs, 0.95, 2000, static_cast<std::uint64_t>(e));
    covered += ci.lo <= 0 && 0 <= ci.hi;
  }
  const double rate = static_cast<double>(covered) / experiments;
  CHECK(rate >= 0.91);
  CHECK(rate <= 0.98);
}

TEST_CASE("session statistics") {
  auto r = record_with("x", std::vector<std::string>(12, "y"));
  for (int i = 0; i < 12; ++i)
    r.interactions[static_cast<std::size_t>(i)].query_type = i < 3 ? QueryType::FreeText : QueryType::Suggested;
  const std::map<SystemTopic, double> lb{{{"s1", "t"}, 40.0}};
  const auto st = session_stats({r}, {40.0}, lb);
  CHECK(st.interactions == 12);
  CHECK(st.pct_free_text == Approx(25.0));
  CHECK(st.pct_suggested == Approx(75.0));
  CHECK(st.explore_seconds == Approx(11.0));
  REQUIRE(st.pct_delta_auc.has_value());
  CHECK(*st.pct_delta_auc == 0.0);

  auto other = r;
  other.system_id = "s2";
  const auto mixed = session_stats({r, other}, {50.0, 10.0}, lb);
  CHECK(mixed.n_missing_lower_bound == 1);
  CHECK(*mixed.pct_delta_auc == Approx(25.0));
  CHECK_THROWS_AS(session_stats({}, {}, lb), ArgumentError);
}
