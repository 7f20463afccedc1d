#include "qfse/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qfse/errors.hpp"
#include "qfse/textproc.hpp"

namespace qfse {

std::vector<Snapshot> snapshots(const SessionRecord& record) {
  std::vector<Snapshot> out;
  Snapshot s{count_words(record.initial_text), record.initial_text};
  out.push_back(s);
  for (const auto& it : record.interactions) {
    if (!it.response_text.empty()) {
      if (!s.text.empty()) s.text.push_back(' ');
      s.text += it.response_text;
    }
    s.length += it.response_word_count;
    out.push_back(s);
  }
  return out;
}

RecallCurve recall_curve(const SessionRecord& record, const std::vector<TokenList>& references,
                         const RougeVariant& variant, CurveMode mode, bool stem) {
  if (references.empty()) throw ArgumentError("recall_curve: no references");
  RougeScorer scorer(references, variant, stem);
  RecallCurve curve;
  TokenList tokens = tokenize(record.initial_text);
  int length = count_words(record.initial_text);
  auto push = [&] {
    if (!curve.points.empty() && length <= curve.points.back().length) return;
    const RougeScore sc = scorer.score(tokens);
    curve.points.push_back({static_cast<double>(length), mode == CurveMode::Recall ? sc.recall : sc.f1});
  };
  push();
  for (const auto& it : record.interactions) {
    const auto more = tokenize(it.response_text);
    tokens.insert(tokens.end(), more.begin(), more.end());
    length += it.response_word_count;
    push();
  }
  return curve;
}

double interpolate(const RecallCurve& curve, double x) {
  const auto& p = curve.points;
  if (p.empty()) throw ArgumentError("interpolate: empty curve");
  if (x <= p.front().length) return p.front().score;
  if (x >= p.back().length) return p.back().score;
  auto it = std::lower_bound(p.begin(), p.end(), x,
                             [](const CurvePoint& c, double v) { return c.length < v; });
  if (it->length == x) return it->score;
  const CurvePoint& b = *it;
  const CurvePoint& a = *(it - 1);
  return a.score + (b.score - a.score) * (x - a.length) / (b.length - a.length);
}

double auc(const RecallCurve& curve, double lo, double hi) {
  if (!(lo < hi)) throw ArgumentError("auc: lo must be < hi");
  std::vector<double> xs{lo};
  for (const auto& pt : curve.points) {
    if (pt.length > lo && pt.length < hi) xs.push_back(pt.length);
  }
  xs.push_back(hi);
  double area = 0;
  double prev_y = interpolate(curve, xs.front());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double y = interpolate(curve, xs[i]);
    area += 0.5 * (prev_y + y) * (xs[i] - xs[i - 1]);
    prev_y = y;
  }
  return area;
}

std::optional<double> length_at_score(const RecallCurve& curve, double target) {
  const auto& p = curve.points;
  if (p.empty()) throw ArgumentError("length_at_score: empty curve");
  if (p.front().score >= target) return p.front().length;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i].score < target) continue;
    if (p[i].score == target) return p[i].length;
    const CurvePoint& a = p[i - 1];
    return a.length + (target - a.score) / (p[i].score - a.score) * (p[i].length - a.length);
  }
  return std::nullopt;
}

std::pair<double, double> intersection_range(const std::vector<RecallCurve>& curves) {
  if (curves.empty()) throw ArgumentError("intersection_range: no curves");
  double lo = -INFINITY, hi = INFINITY;
  for (const auto& c : curves) {
    if (c.points.empty()) throw ArgumentError("intersection_range: empty curve");
    lo = std::max(lo, c.points.front().length);
    hi = std::min(hi, c.points.back().length);
  }
  if (lo > hi) throw ArgumentError("curves have no overlapping length range");
  return {lo, hi};
}

RecallCurve average_curve(const std::vector<RecallCurve>& curves, double lo, double hi, double step) {
  if (curves.empty()) throw ArgumentError("average_curve: no curves");
  if (step <= 0) throw ArgumentError("average_curve: step must be positive");
  if (hi < lo) throw ArgumentError("average_curve: hi < lo");
  RecallCurve out;
  auto add = [&](double x) {
    double s = 0;
    for (const auto& c : curves) s += interpolate(c, x);
    out.points.push_back({x, s / static_cast<double>(curves.size())});
  };
  for (int i = 0;; ++i) {
    const double x = lo + i * step;
    if (x > hi + 1e-9) break;
    add(x);
  }
  if (out.points.back().length < hi - 1e-9) add(hi);
  return out;
}

RecallCurve average_curve(const std::vector<RecallCurve>& curves, double step) {
  const auto [lo, hi] = intersection_range(curves);
  return average_curve(curves, lo, hi, step);
}

double aggregate(const std::vector<std::pair<std::string, double>>& values) {
  if (values.empty()) throw ArgumentError("aggregate: no values");
  std::map<std::string, std::pair<double, int>> per_topic;
  for (const auto& [topic, v] : values) {
    auto& acc = per_topic[topic];
    acc.first += v;
    ++acc.second;
  }
  double total = 0;
  for (const auto& [topic, acc] : per_topic) total += acc.first / acc.second;
  return total / static_cast<double>(per_topic.size());
}

double umux_lite(double r4a, double r4b) {
  if (r4a < 1 || r4a > 5 || r4b < 1 || r4b > 5) throw ArgumentError("umux_lite inputs must be in [1,5]");
  return 0.65 * ((r4a + r4b - 2) * (100.0 / 8.0)) + 22.9;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_stddev(const std::vector<double>& values) {
  if (values.size() < 2) return 0;
  const double m = mean(values);
  double ss = 0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<MetricSummary> aggregate_ratings(const std::vector<SessionRecord>& records) {
  if (records.empty()) throw ArgumentError("aggregate_ratings: no records");
  using Extract = std::optional<double> (*)(const SessionRecord&);
  const std::vector<std::pair<std::string, Extract>> metrics = {
      {"initial_rating",
       [](const SessionRecord& r) -> std::optional<double> {
         if (r.ratings.r1) return *r.ratings.r1;
         return std::nullopt;
       }},
      {"avg_response_rating",
       [](const SessionRecord& r) -> std::optional<double> {
         std::vector<double> v;
         for (const auto& x : r.ratings.r2) {
           if (x) v.push_back(*x);
         }
         if (v.empty()) {
           for (const auto& it : r.interactions) {
             if (it.rating) v.push_back(*it.rating);
           }
         }
         if (v.empty()) return std::nullopt;
         return mean(v);
       }},
      {"responsiveness",
       [](const SessionRecord& r) -> std::optional<double> {
         if (r.ratings.r3) return *r.ratings.r3;
         return std::nullopt;
       }},
      {"effectiveness",
       [](const SessionRecord& r) -> std::optional<double> {
         if (r.ratings.r4a) return *r.ratings.r4a;
         return std::nullopt;
       }},
      {"ease_of_use",
       [](const SessionRecord& r) -> std::optional<double> {
         if (r.ratings.r4b) return *r.ratings.r4b;
         return std::nullopt;
       }},
      {"umux_lite",
       [](const SessionRecord& r) -> std::optional<double> {
         if (r.ratings.r4a && r.ratings.r4b) return umux_lite(*r.ratings.r4a, *r.ratings.r4b);
         return std::nullopt;
       }},
  };

  std::vector<MetricSummary> out;
  for (const auto& [name, extract] : metrics) {
    MetricSummary m;
    m.metric = name;
    std::vector<std::pair<std::string, double>> by_topic;
    std::vector<double> values;
    for (const auto& r : records) {
      if (auto v = extract(r)) {
        by_topic.emplace_back(r.topic_id, *v);
        values.push_back(*v);
      } else {
        ++m.n_excluded;
      }
    }
    m.n_sessions = static_cast<int>(values.size());
    if (!values.empty()) {
      m.mean = aggregate(by_topic);
      m.stddev = sample_stddev(values);
    }
    out.push_back(m);
  }
  return out;
}

std::optional<double> pearson_r(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ArgumentError("pearson_r: length mismatch");
  if (xs.size() < 2) throw ArgumentError("pearson_r: need at least two points");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::pair<double, double>> recall_gain_rating_pairs(
    const SessionRecord& record, const std::vector<TokenList>& references,
    const RougeVariant& variant, bool stem) {
  RougeScorer scorer(references, variant, stem);
  TokenList tokens = tokenize(record.initial_text);
  double prev = scorer.score(tokens).recall;
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < record.interactions.size(); ++i) {
    const auto& it = record.interactions[i];
    const auto more = tokenize(it.response_text);
    tokens.insert(tokens.end(), more.begin(), more.end());
    const double y = scorer.score(tokens).recall;
    std::optional<int> rating = it.rating;
    if (!rating && i < record.ratings.r2.size()) rating = record.ratings.r2[i];
    if (rating && prev > 0) out.emplace_back((y - prev) / prev, *rating);
    prev = y;
  }
  return out;
}

Interval bootstrap_ci(const std::vector<double>& values, double level, int iters, std::uint64_t seed) {
  if (values.empty()) throw ArgumentError("bootstrap_ci: no values");
  if (level <= 0 || level >= 1) throw ArgumentError("bootstrap_ci: level must be in (0,1)");
  if (iters < 1) throw ArgumentError("bootstrap_ci: iters must be >= 1");
  std::mt19937_64 rng(seed);
  const std::uint64_t n = values.size();
  std::vector<double> means(static_cast<std::size_t>(iters));
  for (auto& m : means) {
    double s = 0;
    for (std::uint64_t i = 0; i < n; ++i) s += values[static_cast<std::size_t>(rng() % n)];
    m = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(means.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= means.size()) return means.back();
    return means[i] + frac * (means[i + 1] - means[i]);
  };
  return {quantile((1 - level) / 2), quantile((1 + level) / 2)};
}

SessionStats session_stats(const std::vector<SessionRecord>& records,
                           const std::vector<std::optional<double>>& session_auc,
                           const std::map<SystemTopic, double>& lower_bound_auc) {
  if (records.empty()) throw ArgumentError("session_stats: no records");
  SessionStats st;
  st.n_sessions = static_cast<int>(records.size());
  std::vector<double> counts, spans, sug, free, delta;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto n = r.interactions.size();
    counts.push_back(static_cast<double>(n));
    spans.push_back(n >= 2 ? static_cast<double>(r.interactions.back().timestamp_ms -
                                                 r.interactions.front().timestamp_ms) / 1000.0
                           : 0.0);
    if (n > 0) {
      double s = 0, f = 0;
      for (const auto& it : r.interactions) {
        s += it.query_type == QueryType::Suggested;
        f += it.query_type == QueryType::FreeText;
      }
      sug.push_back(100.0 * s / static_cast<double>(n));
      free.push_back(100.0 * f / static_cast<double>(n));
    }
    auto lb = lower_bound_auc.find({r.system_id, r.topic_id});
    const bool have_auc = i < session_auc.size() && session_auc[i].has_value();
    if (lb == lower_bound_auc.end() || !have_auc || lb->second == 0) {
      ++st.n_missing_lower_bound;
    } else {
      delta.push_back(100.0 * (*session_auc[i] - lb->second) / lb->second);
    }
  }
  st.interactions = mean(counts);
  st.explore_seconds = mean(spans);
  st.pct_suggested = mean(sug);
  st.pct_free_text = mean(free);
  if (!delta.empty()) st.pct_delta_auc = mean(delta);
  return st;
}

}  // namespace qfse
