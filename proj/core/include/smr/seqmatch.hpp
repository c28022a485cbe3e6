#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smr/matrix.hpp"

namespace smr {

/// Sequence distance matrix: D convolved with an L x L identity kernel.
/// Columns before valid_from (= L-1) only have truncated support.
struct SeqDistanceMatrix {
  DistanceMatrix matrix;
  std::size_t seq_len = 1;
  std::size_t valid_from = 0;

  std::size_t rows() const noexcept { return matrix.rows(); }
  std::size_t cols() const noexcept { return matrix.cols(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return matrix(i, j); }
};

/// D_seq(i, j) = sum_{x<L} D(i-x, j-x) where the whole diagonal exists.
/// Near the top/left border only n = min(i, j, L-1) + 1 terms exist; their sum
/// is rescaled by L / n so border scores stay comparable with interior ones.
/// The result carries the meta tag "seq:L=<L>". RangeError if L == 0 or
/// L > min(R, Q).
SeqDistanceMatrix sequence_match(const DistanceMatrix& d, std::size_t seq_len);

/// Rebuilds a SeqDistanceMatrix from a loaded matrix, reading L from its
/// "seq:L=<L>" tag. FormatError if the tag is missing.
SeqDistanceMatrix as_sequence_matrix(DistanceMatrix m);

/// Top-K references per query, ascending score, ties to the lower index.
class MatchSet {
 public:
  MatchSet(std::size_t queries, std::size_t depth, std::size_t first_scored);

  std::size_t queries() const noexcept { return queries_; }
  std::size_t depth() const noexcept { return depth_; }
  /// First query whose scores have full sequence support.
  std::size_t first_scored() const noexcept { return first_scored_; }

  std::span<const std::size_t> ranked(std::size_t query) const noexcept {
    return {refs_.data() + query * depth_, depth_};
  }
  std::span<const double> scores(std::size_t query) const noexcept {
    return {scores_.data() + query * depth_, depth_};
  }
  std::size_t best_ref(std::size_t query) const noexcept { return refs_[query * depth_]; }
  double best_score(std::size_t query) const noexcept { return scores_[query * depth_]; }

  // Writable views, used while building.
  std::span<std::size_t> ranked(std::size_t query) noexcept {
    return {refs_.data() + query * depth_, depth_};
  }
  std::span<double> scores(std::size_t query) noexcept {
    return {scores_.data() + query * depth_, depth_};
  }

 private:
  std::size_t queries_;
  std::size_t depth_;
  std::size_t first_scored_;
  std::vector<std::size_t> refs_;
  std::vector<double> scores_;
};

/// RangeError if K == 0 or K > R.
MatchSet best_matches(const DistanceMatrix& m, std::size_t depth);
MatchSet best_matches(const SeqDistanceMatrix& m, std::size_t depth);

/// Argmin of one column with lower-index tie breaking.
std::size_t column_argmin(const DistanceMatrix& m, std::size_t query);

}  // namespace smr
