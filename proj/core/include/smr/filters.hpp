#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "smr/attributes.hpp"
#include "smr/mlp.hpp"
#include "smr/seqmatch.hpp"

namespace smr {

struct FilterConfig {
  double trust_threshold = 0.5;          // tau: minimum removal score to drop a match
  std::size_t restoration_depth = 3;     // next-ranked candidates considered
  double restoration_threshold = 0.91;   // rho: minimum keep-confidence to restore
};

enum class Verdict { kept, removed, restored };

const char* to_string(Verdict v) noexcept;

struct MatchDecision {
  std::size_t query = 0;
  std::size_t original_ref = 0;
  Verdict verdict = Verdict::kept;
  std::optional<std::size_t> final_ref;
  double removal_score = 0.0;
  std::vector<double> restore_scores;  // keep-confidence per candidate rank 1..K_r
};

/// Removes a match when its removal score reaches tau. Queries before
/// matches.first_scored() pass through as kept. CoverageError if a scored
/// query has no prediction.
std::vector<MatchDecision> remove_matches(const MatchSet& matches, std::span<const PredictionScores> preds,
                                          const FilterConfig& cfg);

/// Keep-confidence for (query, candidate rank).
using CandidateScorer = std::function<double(std::size_t query, std::size_t rank)>;

/// For each removed query, scores ranks 1..K_r of matches.ranked(query) and
/// restores the best candidate (lowest rank on ties) when its score reaches
/// rho. Kept decisions are returned untouched.
std::vector<MatchDecision> restore_matches(std::vector<MatchDecision> decisions, const MatchSet& matches,
                                           const CandidateScorer& scorer, const FilterConfig& cfg);

/// Candidate attributes for (query, rank); rank r uses the rank-r attribute
/// vector of the query slice.
using AttributeProvider = std::function<AttributeVector(std::size_t query, std::size_t rank)>;

/// restore_matches with keep-confidence P(y=0) + P(y=2) from the model.
std::vector<MatchDecision> restore_matches(std::vector<MatchDecision> decisions, const MatchSet& matches,
                                           const AttributeProvider& attrs, const MlpModel& model,
                                           const FilterConfig& cfg);

// CSV: "query,original_ref,verdict,final_ref,removal_score"; final_ref is
// empty for removed matches.
void write_decisions_csv(std::span<const MatchDecision> decisions, std::ostream& out);
std::vector<MatchDecision> read_decisions_csv(std::istream& in);

}  // namespace smr
