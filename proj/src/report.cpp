#include "qfse/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qfse/errors.hpp"
#include "qfse/parallel.hpp"

namespace qfse {
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "N/A"; }

std::string length_label(double l) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", l);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(split_csv_line(line));
  }
  return rows;
}

struct Scored {
  std::vector<RecallCurve> recall;  // per variant
  std::vector<RecallCurve> f1;
};

}  // namespace

void ExperimentSpec::validate() const {
  if (variants.empty()) throw ArgumentError("at least one ROUGE variant is required");
  if (auc_lo && auc_hi && !(*auc_lo < *auc_hi)) throw ArgumentError("auc_lo must be < auc_hi");
  if (curve_step <= 0) throw ArgumentError("curve_step must be positive");
  if (min_sessions < 1) throw ArgumentError("min_sessions must be >= 1");
  if (bootstrap_iters < 1) throw ArgumentError("bootstrap_iters must be >= 1");
  if (bootstrap_level <= 0 || bootstrap_level >= 1) throw ArgumentError("bootstrap level must be in (0,1)");
  for (const auto& [name, target] : las_scores) {
    const bool known = std::any_of(variants.begin(), variants.end(),
                                   [&](const RougeVariant& v) { return rouge_variant_name(v) == name; });
    if (!known) throw ArgumentError("Length@Score variant " + name + " is not evaluated");
  }
}

std::string group_label(const SessionRecord& record) {
  if (record.source == SessionSource::Simulated) return record.system_id + "/" + record.user_id;
  return record.system_id;
}

EvaluationReport evaluate(const std::vector<SessionRecord>& records,
                          const std::map<std::string, std::vector<TokenList>>& references,
                          const ExperimentSpec& spec) {
  spec.validate();
  if (records.empty()) throw ArgumentError("no session records to evaluate");
  for (const auto& r : records) {
    auto it = references.find(r.topic_id);
    if (it == references.end() || it->second.empty()) {
      throw ArgumentError("no reference summaries for topic " + r.topic_id);
    }
  }

  const std::size_t nv = spec.variants.size();
  std::vector<Scored> scored(records.size());
  parallel_for(records.size(), [&](std::size_t i) {
    const auto& refs = references.at(records[i].topic_id);
    for (const auto& v : spec.variants) {
      scored[i].recall.push_back(recall_curve(records[i], refs, v, CurveMode::Recall));
      scored[i].f1.push_back(recall_curve(records[i], refs, v, CurveMode::F1));
    }
  });

  double lo = 0, hi = 0;
  {
    std::vector<RecallCurve> all;
    for (const auto& s : scored) all.push_back(s.recall[0]);
    if (!spec.auc_lo || !spec.auc_hi) {
      const auto range = intersection_range(all);
      lo = spec.auc_lo.value_or(range.first);
      hi = spec.auc_hi.value_or(range.second);
    } else {
      lo = *spec.auc_lo;
      hi = *spec.auc_hi;
    }
    if (!(lo < hi)) {
      throw ArgumentError("AUC bounds are empty (" + num(lo) + " .. " + num(hi) +
                          "); pass explicit bounds");
    }
  }

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) groups[group_label(records[i])].push_back(i);

  for (const auto& [group, idx] : groups) {
    std::map<std::string, int> per_topic;
    for (auto i : idx) ++per_topic[records[i].topic_id];
    for (const auto& [topic, n] : per_topic) {
      if (n < spec.min_sessions) {
        throw ArgumentError(group + " has " + std::to_string(n) + " sessions on " + topic +
                            ", fewer than the required " + std::to_string(spec.min_sessions));
      }
    }
  }

  // Per-session AUC of the first variant feeds the session statistics.
  std::vector<std::optional<double>> primary_auc(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) primary_auc[i] = auc(scored[i].recall[0], lo, hi);

  std::map<SystemTopic, std::pair<double, int>> lb_acc;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.source == SessionSource::Simulated && r.user_id == "sim-sug") {
      auto& acc = lb_acc[{r.system_id, r.topic_id}];
      acc.first += *primary_auc[i];
      ++acc.second;
    }
  }
  std::map<SystemTopic, double> lower_bound;
  for (const auto& [key, acc] : lb_acc) lower_bound[key] = acc.first / acc.second;

  EvaluationReport rep;
  rep.sal_lengths = spec.sal_lengths;
  for (const auto& [group, idx] : groups) {
    for (std::size_t v = 0; v < nv; ++v) {
      const std::string vname = rouge_variant_name(spec.variants[v]);

      AucRow row{group, vname, lo, hi};
      std::vector<std::pair<std::string, double>> values;
      std::map<std::string, std::vector<double>> topic_values;
      for (auto i : idx) {
        const double a = v == 0 ? *primary_auc[i] : auc(scored[i].recall[v], lo, hi);
        values.emplace_back(records[i].topic_id, a);
        topic_values[records[i].topic_id].push_back(a);
      }
      row.auc = aggregate(values);
      std::vector<double> topic_means;
      for (const auto& [t, vals] : topic_values) topic_means.push_back(mean(vals));
      const Interval ci = bootstrap_ci(topic_means, spec.bootstrap_level, spec.bootstrap_iters, spec.seed);
      row.ci_lo = ci.lo;
      row.ci_hi = ci.hi;
      row.n_sessions = static_cast<int>(idx.size());
      row.n_topics = static_cast<int>(topic_values.size());
      rep.auc.push_back(row);

      SalRow sal{group, vname, {}};
      for (double L : spec.sal_lengths) {
        std::vector<std::pair<std::string, double>> at;
        for (auto i : idx) at.emplace_back(records[i].topic_id, score_at_length(scored[i].f1[v], L));
        sal.scores.push_back(aggregate(at));
      }
      rep.sal.push_back(sal);

      auto las = spec.las_scores.find(vname);
      if (las != spec.las_scores.end()) {
        std::vector<RecallCurve> f1s;
        for (auto i : idx) f1s.push_back(scored[i].f1[v]);
        const RecallCurve avg = average_curve(f1s, spec.curve_step);
        rep.las.push_back({group, vname, las->second, length_at_score(avg, las->second)});
      }

      std::vector<RecallCurve> recalls;
      for (auto i : idx) recalls.push_back(scored[i].recall[v]);
      for (const auto& pt : average_curve(recalls, lo, hi, spec.curve_step).points) {
        rep.curves.push_back({group, vname, pt.length, pt.score});
      }
    }

    std::vector<SessionRecord> members;
    std::vector<std::optional<double>> member_auc;
    for (auto i : idx) {
      members.push_back(records[i]);
      member_auc.push_back(primary_auc[i]);
    }
    rep.stats.push_back({group, session_stats(members, member_auc, lower_bound)});

    const bool human = std::any_of(members.begin(), members.end(), [](const SessionRecord& r) {
      return r.source == SessionSource::Human;
    });
    if (!human) continue;
    for (const auto& m : aggregate_ratings(members)) rep.ratings.push_back({group, m});

    std::vector<double> r3, r4a, gain, r2;
    for (auto i : idx) {
      const auto& r = records[i];
      if (r.ratings.r3 && r.ratings.r4a) {
        r3.push_back(*r.ratings.r3);
        r4a.push_back(*r.ratings.r4a);
      }
      for (const auto& [g, rating] :
           recall_gain_rating_pairs(r, references.at(r.topic_id), spec.variants[0])) {
        gain.push_back(g);
        r2.push_back(rating);
      }
    }
    CorrelationRow c1{group, "r3_vs_r4a", std::nullopt, static_cast<int>(r3.size())};
    if (r3.size() >= 2) c1.r = pearson_r(r3, r4a);
    CorrelationRow c2{group, "r2_vs_recall_gain", std::nullopt, static_cast<int>(gain.size())};
    if (gain.size() >= 2) c2.r = pearson_r(r2, gain);
    rep.correlations.push_back(c1);
    rep.correlations.push_back(c2);
  }
  return rep;
}

void write_report(const EvaluationReport& rep, const fs::path& dir) {
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IngestError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("auc.csv");
    out << "group,variant,auc_lo,auc_hi,auc,ci_lo,ci_hi,n_sessions,n_topics\n";
    for (const auto& r : rep.auc) {
      out << r.group << ',' << r.variant << ',' << num(r.lo) << ',' << num(r.hi) << ',' << num(r.auc)
          << ',' << num(r.ci_lo) << ',' << num(r.ci_hi) << ',' << r.n_sessions << ',' << r.n_topics
          << '\n';
    }
  }
  {
    auto out = open("sal.csv");
    out << "group,variant";
    for (double l : rep.sal_lengths) out << ",S@L " << length_label(l);
    out << '\n';
    for (const auto& r : rep.sal) {
      out << r.group << ',' << r.variant;
      for (double s : r.scores) out << ',' << num(s);
      out << '\n';
    }
  }
  {
    auto out = open("las.csv");
    out << "group,variant,target,length\n";
    for (const auto& r : rep.las) {
      out << r.group << ',' << r.variant << ',' << num(r.target) << ',' << num(r.length) << '\n';
    }
  }
  {
    auto out = open("curves.csv");
    out << "group,variant,length,recall\n";
    for (const auto& r : rep.curves) {
      out << r.group << ',' << r.variant << ',' << num(r.length) << ',' << num(r.recall) << '\n';
    }
  }
  {
    auto out = open("ratings.csv");
    out << "group,metric,mean,std,n_sessions,n_excluded\n";
    for (const auto& r : rep.ratings) {
      out << r.group << ',' << r.summary.metric << ',' << num(r.summary.mean) << ','
          << num(r.summary.stddev) << ',' << r.summary.n_sessions << ',' << r.summary.n_excluded << '\n';
    }
  }
  {
    auto out = open("stats.csv");
    out << "group,metric,value,n_sessions,n_excluded\n";
    for (const auto& r : rep.stats) {
      const auto& s = r.stats;
      out << r.group << ",interactions," << num(s.interactions) << ',' << s.n_sessions << ",0\n";
      out << r.group << ",explore_seconds," << num(s.explore_seconds) << ',' << s.n_sessions << ",0\n";
      out << r.group << ",pct_suggested_query," << num(s.pct_suggested) << ',' << s.n_sessions << ",0\n";
      out << r.group << ",pct_free_text_query," << num(s.pct_free_text) << ',' << s.n_sessions << ",0\n";
      out << r.group << ",pct_delta_auc_from_lower_bound," << num(s.pct_delta_auc) << ','
          << s.n_sessions - s.n_missing_lower_bound << ',' << s.n_missing_lower_bound << '\n';
    }
  }
  {
    auto out = open("correlations.csv");
    out << "group,pair,r,n\n";
    for (const auto& r : rep.correlations) {
      out << r.group << ',' << r.pair << ',' << num(r.r) << ',' << r.n << '\n';
    }
  }
}

std::string summarize_report(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ArgumentError("report directory not found: " + dir.string());
  if (!fs::exists(dir / "auc.csv")) throw ArgumentError("no auc.csv in " + dir.string());
  std::ostringstream out;

  const auto auc_rows = read_csv(dir / "auc.csv");
  std::set<std::string> variants;
  for (std::size_t i = 1; i < auc_rows.size(); ++i) {
    if (auc_rows[i].size() >= 7) variants.insert(auc_rows[i][1]);
  }
  for (const auto& variant : variants) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 1; i < auc_rows.size(); ++i) {
      if (auc_rows[i].size() >= 7 && auc_rows[i][1] == variant) rows.push_back(auc_rows[i]);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return std::stod(a[4]) > std::stod(b[4]);
    });
    out << "AUC ranking (" << variant << " recall, words " << rows.front()[2] << ".." << rows.front()[3]
        << ")\n";
    int rank = 1;
    for (const auto& r : rows) {
      out << "  " << rank++ << ". " << r[0] << "  auc=" << r[4] << "  ci=[" << r[5] << ", " << r[6]
          << "]  sessions=" << r[7] << '\n';
    }
  }

  if (fs::exists(dir / "sal.csv")) {
    const auto rows = read_csv(dir / "sal.csv");
    if (rows.size() > 1) {
      out << "Score@Length (F1)\n";
      for (std::size_t i = 1; i < rows.size(); ++i) {
        out << "  " << rows[i][0] << ' ' << rows[i][1];
        for (std::size_t c = 2; c < rows[i].size() && c < rows[0].size(); ++c) {
          out << "  " << rows[0][c] << '=' << rows[i][c];
        }
        out << '\n';
      }
    }
  }

  if (fs::exists(dir / "las.csv")) {
    const auto rows = read_csv(dir / "las.csv");
    if (rows.size() > 1) {
      out << "Length@Score (F1)\n";
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << "  " << r[0] << ' ' << r[1] << " target " << r[2] << ": ";
        if (r[3] == "N/A") {
          out << "N/A (target not reached)\n";
        } else {
          out << r[3] << " words\n";
        }
      }
    }
  }

  if (fs::exists(dir / "ratings.csv")) {
    const auto rows = read_csv(dir / "ratings.csv");
    if (rows.size() > 1) {
      out << "Ratings (macro mean, std)\n";
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << "  " << r[0] << ' ' << r[1] << ": " << r[2] << " (" << r[3] << "), n=" << r[4];
        if (r[5] != "0") out << ", excluded " << r[5];
        out << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace qfse
