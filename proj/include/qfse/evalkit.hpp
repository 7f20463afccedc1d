#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfse/rouge.hpp"
#include "qfse/session_log.hpp"

namespace qfse {

// ---------------------------------------------------------------------------
// Snapshots and recall-by-length curves

struct Snapshot {
  int length = 0;  // cumulative words
  std::string text;
};

/// σ₀ followed by σ₀ + r₁, σ₀ + r₁ + r₂, ... Lengths are the initial word
/// count plus the recorded response word counts.
std::vector<Snapshot> snapshots(const SessionRecord& record);

struct CurvePoint {
  double length = 0;
  double score = 0;
};

/// Points strictly increasing in length.
struct RecallCurve {
  std::vector<CurvePoint> points;
};

enum class CurveMode { Recall, F1 };

/// One point per snapshot. Snapshots that add no words (empty responses)
/// are folded into the previous point. Throws ArgumentError on empty references.
RecallCurve recall_curve(const SessionRecord& record, const std::vector<TokenList>& references,
                         const RougeVariant& variant, CurveMode mode, bool stem = true);

/// Linear interpolation; clamps to the terminal values outside the curve.
double interpolate(const RecallCurve& curve, double x);

/// Exact area under the interpolated (clamped) curve over [lo, hi].
double auc(const RecallCurve& curve, double lo, double hi);

inline double score_at_length(const RecallCurve& curve, double length) {
  return interpolate(curve, length);
}

/// Smallest interpolated length at which the curve reaches `target`;
/// nullopt when it never does.
std::optional<double> length_at_score(const RecallCurve& curve, double target);

/// [max first length, min last length] over the curves. Throws ArgumentError
/// when the ranges do not overlap.
std::pair<double, double> intersection_range(const std::vector<RecallCurve>& curves);

/// Mean of interpolated values on the grid lo, lo+step, ..., hi (hi always included).
RecallCurve average_curve(const std::vector<RecallCurve>& curves, double lo, double hi,
                          double step = 10);
/// Same, on the curves' intersection range.
RecallCurve average_curve(const std::vector<RecallCurve>& curves, double step = 10);

// ---------------------------------------------------------------------------
// Aggregation and statistics

/// Macro average: mean within each topic, then mean of topic means.
double aggregate(const std::vector<std::pair<std::string, double>>& values);

/// 0.65 * ((a + b - 2) * 100/8) + 22.9 for 1..5 inputs.
double umux_lite(double r4a, double r4b);

struct MetricSummary {
  std::string metric;
  double mean = 0;   // macro over topics
  double stddev = 0; // sample std over session values
  int n_sessions = 0;
  int n_excluded = 0;  // sessions lacking the rating
};

/// Rows: initial_rating, avg_response_rating, responsiveness, effectiveness,
/// ease_of_use, umux_lite.
std::vector<MetricSummary> aggregate_ratings(const std::vector<SessionRecord>& records);

/// Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson_r(const std::vector<double>& xs, const std::vector<double>& ys);

/// (relative recall increase Δyᵢ/yᵢ₋₁, response rating) per rated interaction,
/// skipping i where yᵢ₋₁ = 0.
std::vector<std::pair<double, double>> recall_gain_rating_pairs(
    const SessionRecord& record, const std::vector<TokenList>& references,
    const RougeVariant& variant = RougeVariant::r1(), bool stem = true);

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Seeded percentile bootstrap of the mean.
Interval bootstrap_ci(const std::vector<double>& values, double level = 0.95, int iters = 10000,
                      std::uint64_t seed = 0);

double mean(const std::vector<double>& values);
double sample_stddev(const std::vector<double>& values);

struct SessionStats {
  double interactions = 0;
  double explore_seconds = 0;
  double pct_suggested = 0;
  double pct_free_text = 0;
  std::optional<double> pct_delta_auc;
  int n_sessions = 0;
  int n_missing_lower_bound = 0;
};

using SystemTopic = std::pair<std::string, std::string>;

/// Per-session counts averaged over sessions. `session_auc[i]` belongs to
/// `records[i]`; the ΔAUC row uses the (system, topic) lower bound.
SessionStats session_stats(const std::vector<SessionRecord>& records,
                           const std::vector<std::optional<double>>& session_auc,
                           const std::map<SystemTopic, double>& lower_bound_auc);

}  // namespace qfse
