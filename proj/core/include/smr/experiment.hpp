#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smr/attributes.hpp"
#include "smr/config.hpp"
#include "smr/eval.hpp"
#include "smr/filters.hpp"
#include "smr/labeling.hpp"
#include "smr/mlp.hpp"
#include "smr/seqmatch.hpp"
#include "smr/synth.hpp"

namespace smr {

/// Everything the predictor needs for one distance matrix at one L.
struct PreparedScenario {
  std::string name;
  DistanceMatrix distances;
  GroundTruth truth;
  SeqDistanceMatrix seq;
  MatchSet matches{0, 1, 0};
  std::vector<OutcomeLabel> labels;      // queries >= L-1
  std::vector<AttributeVector> attributes;  // (query, rank) for queries >= L-1
  std::size_t depth = 1;

  std::size_t first_query() const noexcept { return seq.valid_from; }
  const AttributeVector& attribute(std::size_t query, std::size_t rank) const;
  const OutcomeLabel& label(std::size_t query) const;
};

PreparedScenario prepare(std::string name, DistanceMatrix d, GroundTruth gt, const RunConfig& cfg);
PreparedScenario prepare(const Scenario& s, const RunConfig& cfg);

/// Queries in [begin, end), clipped to the labelled range.
struct QueryRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// First half of the queries trains, second half tests.
QueryRange train_range(const PreparedScenario& p);
QueryRange test_range(const PreparedScenario& p);

/// Rank-0 attributes projected onto `input_attributes`, labelled.
Dataset labelled_rows(const PreparedScenario& p, QueryRange range, const std::vector<std::size_t>& input_attributes);

/// Pools the training halves, balances them with SMOTE and trains.
MlpModel train_predictor(const std::vector<PreparedScenario>& scenarios, const RunConfig& cfg,
                         const std::vector<std::size_t>& input_attributes = {0, 1, 2, 3});

std::vector<PredictionScores> predict_range(const PreparedScenario& p, const MlpModel& model, QueryRange range);

/// Macro F1 of the model's rank-0 predictions over the pooled test halves.
double test_macro_f1(const std::vector<PreparedScenario>& scenarios, const MlpModel& model);

struct ScenarioEvaluation {
  std::string name;
  EvalReport baseline;   // VPR + SM
  EvalReport filtered;   // VPR + SM + Pred (removal)
  EvalReport restored;   // removal followed by restoration
  ReductionRow removal;
  std::size_t removed = 0;
  std::size_t restorations = 0;
  std::size_t false_positives_before = 0;
  std::size_t false_positives_removed = 0;
  std::size_t true_positives_removed = 0;
  double macro_f1 = 0.0;
};

/// Evaluates the test half of one scenario. Baseline and filtered curves are
/// integrated up to the filtered system's maximum recall; the restored curve
/// up to its own.
ScenarioEvaluation evaluate_scenario(const PreparedScenario& p, const MlpModel& model, const RunConfig& cfg);

/// Same, with the true labels standing in for the predictor (one-hot scores).
ScenarioEvaluation evaluate_with_oracle(const PreparedScenario& p, const RunConfig& cfg);

struct BatterySummary {
  std::vector<ScenarioEvaluation> scenarios;
  double mean_reduction = 0.0;
  double improved_fraction = 0.0;  // scenarios with filtered aoc <= baseline aoc
  double mean_auc_baseline = 0.0;
  double mean_auc_filtered = 0.0;
  double mean_auc_restored = 0.0;
  double mean_macro_f1 = 0.0;
};

BatterySummary summarize(std::vector<ScenarioEvaluation> evals);

/// Full run on a prepared battery: train on training halves, evaluate test halves.
BatterySummary run_battery(const std::vector<PreparedScenario>& prepared, const RunConfig& cfg,
                           MlpModel* model_out = nullptr);

std::string summary_to_json(const BatterySummary& summary);

}  // namespace smr
