#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfse/evalkit.hpp"
#include "qfse/rouge.hpp"
#include "qfse/session_log.hpp"

namespace qfse {

struct ExperimentSpec {
  std::vector<RougeVariant> variants = {RougeVariant::r1(), RougeVariant::r2(), RougeVariant::rl(),
                                        RougeVariant::su4()};
  std::optional<double> auc_lo;  // default: intersection of all session ranges
  std::optional<double> auc_hi;
  std::vector<double> sal_lengths = {150, 250, 350};
  std::map<std::string, double> las_scores;  // variant name ("R1", ...) -> target F1
  double curve_step = 10;
  int min_sessions = 1;  // per (group, topic)
  int bootstrap_iters = 10000;
  double bootstrap_level = 0.95;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Label under which a record is reported: the system id for human sessions,
/// "system/user" for simulated ones (e.g. "s1/sim-sug").
std::string group_label(const SessionRecord& record);

struct AucRow {
  std::string group, variant;
  double lo = 0, hi = 0, auc = 0, ci_lo = 0, ci_hi = 0;
  int n_sessions = 0, n_topics = 0;
};

struct SalRow {
  std::string group, variant;
  std::vector<double> scores;  // one per spec.sal_lengths
};

struct LasRow {
  std::string group, variant;
  double target = 0;
  std::optional<double> length;  // nullopt: never reached
};

struct CurveRow {
  std::string group, variant;
  double length = 0, recall = 0;
};

struct RatingRow {
  std::string group;
  MetricSummary summary;
};

struct StatsRow {
  std::string group;
  SessionStats stats;
};

struct CorrelationRow {
  std::string group, pair;
  std::optional<double> r;
  int n = 0;
};

struct EvaluationReport {
  std::vector<double> sal_lengths;
  std::vector<AucRow> auc;
  std::vector<SalRow> sal;
  std::vector<LasRow> las;
  std::vector<CurveRow> curves;
  std::vector<RatingRow> ratings;
  std::vector<StatsRow> stats;
  std::vector<CorrelationRow> correlations;
};

/// Scores every record against its topic's references. Throws ArgumentError
/// for an empty record list, a topic without references, or empty AUC bounds.
EvaluationReport evaluate(const std::vector<SessionRecord>& records,
                          const std::map<std::string, std::vector<TokenList>>& references,
                          const ExperimentSpec& spec);

/// Writes auc.csv, sal.csv, las.csv, curves.csv, ratings.csv, stats.csv and
/// correlations.csv into `dir`.
void write_report(const EvaluationReport& report, const std::filesystem::path& dir);

/// Human-readable digest of a report directory. Throws ArgumentError when the
/// directory or its auc.csv is missing.
std::string summarize_report(const std::filesystem::path& dir);

}  // namespace qfse
