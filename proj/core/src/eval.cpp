#include "smr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "smr/error.hpp"

namespace smr {

std::vector<ScoredMatch> scored_matches(const MatchSet& matches) {
  std::vector<ScoredMatch> out;
  for (std::size_t j = matches.first_scored(); j < matches.queries(); ++j) {
    out.push_back({j, matches.best_ref(j), -matches.best_score(j)});
  }
  return out;
}

std::vector<ScoredMatch> scored_decisions(std::span<const MatchDecision> decisions, const SeqDistanceMatrix& seq) {
  std::vector<ScoredMatch> out;
  for (const auto& d : decisions) {
    if (d.query < seq.valid_from) continue;
    if (d.query >= seq.cols()) throw ShapeError("decision for query " + std::to_string(d.query) + " outside matrix");
    ScoredMatch m;
    m.query = d.query;
    m.ref = d.final_ref;
    const std::size_t scored_ref = d.final_ref.value_or(d.original_ref);
    if (scored_ref >= seq.rows()) throw ShapeError("decision references row " + std::to_string(scored_ref));
    m.confidence = -seq(scored_ref, d.query);
    out.push_back(m);
  }
  return out;
}

PrCurve pr_curve(std::span<const ScoredMatch> matches, const GroundTruth& gt) {
  if (matches.empty()) throw DataError("precision-recall curve over an empty query set");
  struct Entry {
    double confidence;
    bool correct;
  };
  std::vector<Entry> accepted;
  for (const auto& m : matches) {
    if (m.query >= gt.queries()) throw ShapeError("query " + std::to_string(m.query) + " has no ground truth");
    if (!std::isfinite(m.confidence)) throw DataError("non-finite match score for query " + std::to_string(m.query));
    if (m.ref) accepted.push_back({m.confidence, gt.is_correct(m.query, *m.ref)});
  }
  std::sort(accepted.begin(), accepted.end(), [](const Entry& a, const Entry& b) { return a.confidence > b.confidence; });

  PrCurve curve;
  curve.queries = matches.size();
  const auto total = static_cast<double>(matches.size());
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t k = 0; k < accepted.size();) {
    const double threshold = accepted[k].confidence;
    for (; k < accepted.size() && accepted[k].confidence == threshold; ++k) {
      (accepted[k].correct ? tp : fp) += 1.0;
    }
    const double fn = total - tp - fp;
    PrPoint p;
    p.threshold = threshold;
    p.precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
    p.recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
    curve.points.push_back(p);
    curve.max_recall = std::max(curve.max_recall, p.recall);
  }
  return curve;
}

AreaSummary auc_aoc(const PrCurve& curve, double recall_cap) {
  if (!(recall_cap > 0.0)) throw RangeError("recall cap must be > 0");
  AreaSummary s;
  s.range = std::min(curve.max_recall, recall_cap);
  if (curve.points.empty() || s.range <= 0.0) return s;

  const auto& pts = curve.points;
  double prev_r = std::min(pts.front().recall, s.range);
  double area = prev_r * pts.front().precision;
  double prev_p = pts.front().precision;
  for (std::size_t k = 1; k < pts.size() && prev_r < s.range; ++k) {
    double r = pts[k].recall;
    double p = pts[k].precision;
    if (r > s.range) {
      p = prev_p + (p - prev_p) * (s.range - prev_r) / (r - prev_r);
      r = s.range;
    }
    area += 0.5 * (prev_p + p) * (r - prev_r);
    prev_r = r;
    prev_p = p;
  }
  s.auc = area;
  s.aoc = s.range - area;
  return s;
}

EvalReport make_report(PrCurve curve, double recall_cap, std::string label) {
  EvalReport r;
  r.label = std::move(label);
  r.max_recall = curve.max_recall;
  r.recall_cap = recall_cap;
  const auto area = auc_aoc(curve, recall_cap);
  r.range = area.range;
  r.auc = area.auc;
  r.aoc = area.aoc;
  if (!curve.points.empty()) {
    r.precision = curve.points.back().precision;
    r.recall = curve.points.back().recall;
    r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  }
  r.curve = std::move(curve);
  return r;
}

std::pair<EvalReport, EvalReport> align_reports(const EvalReport& baseline, const EvalReport& filtered) {
  if (filtered.max_recall > 0.0) {
    const double cap = filtered.max_recall;
    return {make_report(baseline.curve, cap, baseline.label), make_report(filtered.curve, cap, filtered.label)};
  }
  // A filtered system that accepts nothing leaves an empty recall range;
  // both reports then integrate over it and carry zero area.
  auto empty = [](const EvalReport& r) {
    EvalReport out = r;
    out.recall_cap = 0.0;
    out.range = out.auc = out.aoc = 0.0;
    return out;
  };
  return {empty(baseline), empty(filtered)};
}

double aoc_reduction_percent(double aoc_baseline, double aoc_filtered) {
  if (aoc_baseline == 0.0) return 0.0;
  return 100.0 * (aoc_baseline - aoc_filtered) / aoc_baseline;
}

ReductionRow compare_reports(const EvalReport& baseline, const EvalReport& filtered) {
  ReductionRow row;
  row.auc_baseline = baseline.auc;
  row.auc_filtered = filtered.auc;
  row.aoc_baseline = baseline.aoc;
  row.aoc_filtered = filtered.aoc;
  row.reduction_percent = aoc_reduction_percent(baseline.aoc, filtered.aoc);
  return row;
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  std::string s(buf);
  return s == "-0.00" ? "0.00" : s;
}

std::string report_to_json(const EvalReport& report) {
  using nlohmann::json;
  json curve = json::array();
  for (const auto& p : report.curve.points) curve.push_back({p.threshold, p.precision, p.recall});
  json doc = {{"version", 1},
              {"label", report.label},
              {"maxRecall", report.max_recall},
              {"recallCap", report.recall_cap},
              {"integrationRange", report.range},
              {"auc", report.auc},
              {"aoc", report.aoc},
              {"precision", report.precision},
              {"recall", report.recall},
              {"f1", report.f1},
              {"queries", report.curve.queries},
              {"curve", std::move(curve)}};
  return doc.dump(1);
}

EvalReport report_from_json(const std::string& text) {
  using nlohmann::json;
  try {
    const auto doc = json::parse(text);
    EvalReport r;
    r.label = doc.value("label", std::string{});
    r.max_recall = doc.at("maxRecall").get<double>();
    r.recall_cap = doc.at("recallCap").get<double>();
    r.range = doc.at("integrationRange").get<double>();
    r.auc = doc.at("auc").get<double>();
    r.aoc = doc.at("aoc").get<double>();
    r.precision = doc.value("precision", 0.0);
    r.recall = doc.value("recall", 0.0);
    r.f1 = doc.value("f1", 0.0);
    r.curve.queries = doc.value("queries", std::size_t{0});
    r.curve.max_recall = r.max_recall;
    for (const auto& p : doc.at("curve")) r.curve.points.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("report json: ") + e.what());
  }
}

void write_curve_csv(const PrCurve& curve, std::ostream& out) {
  out << "threshold,precision,recall\n";
  for (const auto& p : curve.points) {
    out << format_double(p.threshold) << ',' << format_double(p.precision) << ',' << format_double(p.recall) << '\n';
  }
}

}  // namespace smr
