#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smr/filters.hpp"
#include "smr/matrix.hpp"
#include "smr/seqmatch.hpp"

namespace smr {

/// One query's proposed match. ref is empty when the match was removed;
/// confidence is higher-is-better (negated distance).
struct ScoredMatch {
  std::size_t query = 0;
  std::optional<std::size_t> ref;
  double confidence = 0.0;
};

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Points in descending-threshold order, which is non-decreasing recall.
struct PrCurve {
  std::vector<PrPoint> points;
  double max_recall = 0.0;
  std::size_t queries = 0;
};

/// Best sequence match of every query j >= first_scored, unfiltered.
std::vector<ScoredMatch> scored_matches(const MatchSet& matches);

/// Final references from filter decisions, scored by -seq(final_ref, j).
/// Only queries j >= seq.valid_from are included.
std::vector<ScoredMatch> scored_decisions(std::span<const MatchDecision> decisions, const SeqDistanceMatrix& seq);

/// Threshold sweep over the distinct confidences. At threshold t a match is
/// accepted when it is present and confidence >= t. TP = accepted and within
/// tolerance, FP = accepted otherwise, FN = every query not accepted
/// (removed matches are never accepted). DataError on an empty input.
PrCurve pr_curve(std::span<const ScoredMatch> matches, const GroundTruth& gt);

struct AreaSummary {
  double auc = 0.0;
  double aoc = 0.0;
  double range = 0.0;  // min(max_recall, recall_cap)
};

/// Trapezoidal area under precision over recall in [0, range]. The segment
/// before the first point uses the first point's precision; the curve is
/// linearly interpolated at the cap. aoc = range - auc. RangeError if
/// recall_cap <= 0.
AreaSummary auc_aoc(const PrCurve& curve, double recall_cap);

struct EvalReport {
  std::string label;
  double max_recall = 0.0;
  double recall_cap = 1.0;
  double range = 0.0;
  double auc = 0.0;
  double aoc = 0.0;
  // Operating point with every remaining match accepted.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  PrCurve curve;
};

EvalReport make_report(PrCurve curve, double recall_cap, std::string label = {});

/// Re-integrates both reports up to the filtered report's max recall. If the
/// filtered system accepts nothing, both get an empty range and zero area.
std::pair<EvalReport, EvalReport> align_reports(const EvalReport& baseline, const EvalReport& filtered);

struct ReductionRow {
  double auc_baseline = 0.0;
  double auc_filtered = 0.0;
  double aoc_baseline = 0.0;
  double aoc_filtered = 0.0;
  double reduction_percent = 0.0;  // positive = improvement
};

/// 100 * (aoc_base - aoc_filtered) / aoc_base, 0 when aoc_base is 0.
double aoc_reduction_percent(double aoc_baseline, double aoc_filtered);

/// Expects both reports integrated over the same recall range.
ReductionRow compare_reports(const EvalReport& baseline, const EvalReport& filtered);

/// Formats a percentage with two decimals.
std::string format_percent(double value);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);
void write_curve_csv(const PrCurve& curve, std::ostream& out);

}  // namespace smr
