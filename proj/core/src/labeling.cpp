#include "smr/labeling.hpp"

#include <string>

#include "smr/error.hpp"

namespace smr {

std::vector<OutcomeLabel> label_queries(const DistanceMatrix& d, const SeqDistanceMatrix& seq,
                                        const GroundTruth& gt) {
  if (d.rows() != seq.rows() || d.cols() != seq.cols()) {
    throw ShapeError("single-frame matrix is " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                     ", sequence matrix is " + std::to_string(seq.rows()) + "x" + std::to_string(seq.cols()));
  }
  gt.validate_against(d);

  std::vector<OutcomeLabel> labels;
  for (std::size_t j = seq.valid_from; j < d.cols(); ++j) {
    OutcomeLabel out;
    out.query = j;
    out.correct_before = gt.is_correct(j, column_argmin(d, j));
    out.correct_after = gt.is_correct(j, column_argmin(seq.matrix, j));
    out.label = outcome_class(out.correct_before, out.correct_after);
    labels.push_back(out);
  }
  return labels;
}

std::array<std::size_t, kClassCount> class_histogram(const std::vector<OutcomeLabel>& labels) {
  std::array<std::size_t, kClassCount> counts{};
  for (const auto& l : labels) ++counts[static_cast<std::size_t>(l.label)];
  return counts;
}

}  // namespace smr
