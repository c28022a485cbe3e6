#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "smr/matrix.hpp"
#include "smr/seqmatch.hpp"

namespace smr {

inline constexpr int kClassCount = 4;

/// Sequence-matching outcome for one query:
///   0 correct before and after, 1 correct before / incorrect after,
///   2 incorrect before / correct after, 3 incorrect before and after.
struct OutcomeLabel {
  std::size_t query = 0;
  int label = 0;
  bool correct_before = false;
  bool correct_after = false;
};

constexpr int outcome_class(bool correct_before, bool correct_after) noexcept {
  return (correct_before ? 0 : 2) + (correct_after ? 0 : 1);
}

/// Labels for queries j >= L-1. Best matches use lower-index tie breaking.
/// ShapeError if the matrices or ground truth disagree in shape.
std::vector<OutcomeLabel> label_queries(const DistanceMatrix& d, const SeqDistanceMatrix& seq,
                                        const GroundTruth& gt);

std::array<std::size_t, kClassCount> class_histogram(const std::vector<OutcomeLabel>& labels);

}  // namespace smr
