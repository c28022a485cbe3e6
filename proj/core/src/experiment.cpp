#include "smr/experiment.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "smr/error.hpp"

namespace smr {

const AttributeVector& PreparedScenario::attribute(std::size_t query, std::size_t rank) const {
  if (query < first_query() || query >= distances.cols() || rank >= depth) {
    throw RangeError("no attributes for query " + std::to_string(query) + " rank " + std::to_string(rank));
  }
  return attributes[(query - first_query()) * depth + rank];
}

const OutcomeLabel& PreparedScenario::label(std::size_t query) const {
  if (query < first_query() || query >= distances.cols()) throw RangeError("no label for query " + std::to_string(query));
  return labels[query - first_query()];
}

PreparedScenario prepare(std::string name, DistanceMatrix d, GroundTruth gt, const RunConfig& cfg) {
  cfg.validate();
  gt.tolerance = cfg.tolerance;
  PreparedScenario p;
  p.name = std::move(name);
  p.depth = std::max(cfg.rank_depth, cfg.restoration_depth + 1);
  p.seq = sequence_match(d, cfg.seq_len);
  p.matches = best_matches(p.seq, p.depth);
  p.labels = label_queries(d, p.seq, gt);
  p.attributes = matrix_attributes(d, cfg.seq_len, p.depth, cfg.smoothing());
  p.distances = std::move(d);
  p.truth = std::move(gt);
  return p;
}

PreparedScenario prepare(const Scenario& s, const RunConfig& cfg) { return prepare(s.name, s.distances, s.truth, cfg); }

QueryRange train_range(const PreparedScenario& p) {
  const std::size_t mid = p.distances.cols() / 2;
  return {p.first_query(), std::max(p.first_query(), mid)};
}

QueryRange test_range(const PreparedScenario& p) {
  const std::size_t mid = p.distances.cols() / 2;
  return {std::max(p.first_query(), mid), p.distances.cols()};
}

Dataset labelled_rows(const PreparedScenario& p, QueryRange range, const std::vector<std::size_t>& input_attributes) {
  Dataset data;
  data.dim = input_attributes.size();
  std::vector<double> x(input_attributes.size());
  for (std::size_t j = std::max(range.begin, p.first_query()); j < range.end; ++j) {
    const auto all = p.attribute(j, 0).values();
    for (std::size_t k = 0; k < input_attributes.size(); ++k) x[k] = all.at(input_attributes[k]);
    data.add(x, p.label(j).label);
  }
  return data;
}

MlpModel train_predictor(const std::vector<PreparedScenario>& scenarios, const RunConfig& cfg,
                         const std::vector<std::size_t>& input_attributes) {
  Dataset pooled;
  pooled.dim = input_attributes.size();
  std::string trained_on;
  for (const auto& p : scenarios) {
    const auto rows = labelled_rows(p, train_range(p), input_attributes);
    pooled.features.insert(pooled.features.end(), rows.features.begin(), rows.features.end());
    pooled.labels.insert(pooled.labels.end(), rows.labels.begin(), rows.labels.end());
    trained_on += (trained_on.empty() ? "" : ",") + p.name;
  }
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  const Dataset balanced = smote_oversample(pooled, tc.smote_neighbors, cfg.seed);
  MlpModel model = train(balanced, tc, input_attributes);
  model.trained_on = trained_on + " (L=" + std::to_string(cfg.seq_len) + ")";
  return model;
}

std::vector<PredictionScores> predict_range(const PreparedScenario& p, const MlpModel& model, QueryRange range) {
  std::vector<PredictionScores> out;
  for (std::size_t j = std::max(range.begin, p.first_query()); j < range.end; ++j) {
    out.push_back(predict(model, p.attribute(j, 0)));
  }
  return out;
}

double test_macro_f1(const std::vector<PreparedScenario>& scenarios, const MlpModel& model) {
  std::vector<int> truth;
  std::vector<int> predicted;
  for (const auto& p : scenarios) {
    for (const auto& s : predict_range(p, model, test_range(p))) {
      truth.push_back(p.label(s.query).label);
      predicted.push_back(s.predicted);
    }
  }
  return macro_f1(truth, predicted);
}

namespace {

ScenarioEvaluation evaluate_range(const PreparedScenario& p, std::span<const PredictionScores> preds,
                                  const CandidateScorer& scorer, QueryRange range, const RunConfig& cfg) {
  ScenarioEvaluation ev;
  ev.name = p.name;
  const auto filter = cfg.filter();
  auto decisions = remove_matches(p.matches, preds, filter);
  auto restored = restore_matches(decisions, p.matches, scorer, filter);

  const auto in_range = [&](std::size_t j) { return j >= range.begin && j < range.end && j >= p.first_query(); };
  std::vector<ScoredMatch> base;
  std::vector<MatchDecision> kept;
  std::vector<MatchDecision> kept_restored;
  std::vector<int> truth;
  std::vector<int> predicted;
  for (std::size_t j = 0; j < p.matches.queries(); ++j) {
    if (!in_range(j)) continue;
    base.push_back({j, p.matches.best_ref(j), -p.matches.best_score(j)});
    kept.push_back(decisions[j]);
    kept_restored.push_back(restored[j]);
    const bool correct = p.truth.is_correct(j, p.matches.best_ref(j));
    const bool removed = decisions[j].verdict == Verdict::removed;
    ev.false_positives_before += correct ? 0 : 1;
    ev.false_positives_removed += (!correct && removed) ? 1 : 0;
    ev.true_positives_removed += (correct && removed) ? 1 : 0;
    ev.removed += removed ? 1 : 0;
    ev.restorations += restored[j].verdict == Verdict::restored ? 1 : 0;
    truth.push_back(p.label(j).label);
  }
  for (const auto& pr : preds) {
    if (in_range(pr.query)) predicted.push_back(pr.predicted);
  }
  if (predicted.size() == truth.size()) ev.macro_f1 = macro_f1(truth, predicted);

  const auto base_curve = pr_curve(base, p.truth);
  const auto filt_curve = pr_curve(scored_decisions(kept, p.seq), p.truth);
  const auto rest_curve = pr_curve(scored_decisions(kept_restored, p.seq), p.truth);
  auto aligned = align_reports(make_report(base_curve, 1.0, "VPR+SM"), make_report(filt_curve, 1.0, "VPR+SM+Pred"));
  ev.baseline = std::move(aligned.first);
  ev.filtered = std::move(aligned.second);
  ev.restored = make_report(rest_curve, 1.0, "VPR+SM+Pred+Restore");
  ev.removal = compare_reports(ev.baseline, ev.filtered);
  return ev;
}

}  // namespace

ScenarioEvaluation evaluate_scenario(const PreparedScenario& p, const MlpModel& model, const RunConfig& cfg) {
  const auto preds = predict_range(p, model, {p.first_query(), p.distances.cols()});
  const CandidateScorer scorer = [&](std::size_t query, std::size_t rank) {
    return predict(model, p.attribute(query, rank)).keep_score();
  };
  return evaluate_range(p, preds, scorer, test_range(p), cfg);
}

ScenarioEvaluation evaluate_with_oracle(const PreparedScenario& p, const RunConfig& cfg) {
  std::vector<PredictionScores> preds;
  for (const auto& l : p.labels) {
    PredictionScores s;
    s.query = l.query;
    s.probs[static_cast<std::size_t>(l.label)] = 1.0;
    s.predicted = l.label;
    s.removal_score = s.probs[1] + s.probs[3];
    preds.push_back(s);
  }
  // Oracle restoration: a candidate is trusted exactly when it is correct.
  const CandidateScorer scorer = [&](std::size_t query, std::size_t rank) {
    return p.truth.is_correct(query, p.matches.ranked(query)[rank]) ? 1.0 : 0.0;
  };
  return evaluate_range(p, preds, scorer, {p.first_query(), p.distances.cols()}, cfg);
}

BatterySummary summarize(std::vector<ScenarioEvaluation> evals) {
  BatterySummary s;
  s.scenarios = std::move(evals);
  if (s.scenarios.empty()) return s;
  std::size_t improved = 0;
  for (const auto& e : s.scenarios) {
    s.mean_reduction += e.removal.reduction_percent;
    s.mean_auc_baseline += e.baseline.auc;
    s.mean_auc_filtered += e.filtered.auc;
    s.mean_auc_restored += e.restored.auc;
    s.mean_macro_f1 += e.macro_f1;
    improved += e.filtered.aoc <= e.baseline.aoc ? 1 : 0;
  }
  const auto n = static_cast<double>(s.scenarios.size());
  s.mean_reduction /= n;
  s.mean_auc_baseline /= n;
  s.mean_auc_filtered /= n;
  s.mean_auc_restored /= n;
  s.mean_macro_f1 /= n;
  s.improved_fraction = static_cast<double>(improved) / n;
  return s;
}

BatterySummary run_battery(const std::vector<PreparedScenario>& prepared, const RunConfig& cfg, MlpModel* model_out) {
  const auto model = train_predictor(prepared, cfg);
  std::vector<ScenarioEvaluation> evals;
  for (const auto& p : prepared) evals.push_back(evaluate_scenario(p, model, cfg));
  if (model_out) *model_out = model;
  return summarize(std::move(evals));
}

std::string summary_to_json(const BatterySummary& summary) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& e : summary.scenarios) {
    rows.push_back({{"scenario", e.name},
                    {"aucBaseline", e.baseline.auc},
                    {"aucFiltered", e.filtered.auc},
                    {"aucRestored", e.restored.auc},
                    {"aocBaseline", e.baseline.aoc},
                    {"aocFiltered", e.filtered.aoc},
                    {"recallCap", e.filtered.recall_cap},
                    {"maxRecallFiltered", e.filtered.max_recall},
                    {"reductionPercent", e.removal.reduction_percent},
                    {"removed", e.removed},
                    {"restored", e.restorations},
                    {"falsePositivesBefore", e.false_positives_before},
                    {"falsePositivesRemoved", e.false_positives_removed},
                    {"truePositivesRemoved", e.true_positives_removed},
                    {"macroF1", e.macro_f1}});
  }
  json doc = {{"scenarios", std::move(rows)},
              {"meanReductionPercent", summary.mean_reduction},
              {"improvedFraction", summary.improved_fraction},
              {"meanAucBaseline", summary.mean_auc_baseline},
              {"meanAucFiltered", summary.mean_auc_filtered},
              {"meanAucRestored", summary.mean_auc_restored},
              {"meanMacroF1", summary.mean_macro_f1}};
  return doc.dump(1);
}

}  // namespace smr
