#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smr/labeling.hpp"

namespace smr {

/// Dense labelled feature rows, row-major n x dim.
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> row(std::size_t i) const noexcept { return {features.data() + i * dim, dim}; }

  void add(std::span<const double> x, int label);
  Dataset subset(std::span<const std::size_t> rows) const;
  std::array<std::size_t, kClassCount> histogram() const;
};

/// Oversamples every minority class up to the majority count. Synthetic
/// points are x + u * (nn - x) with nn one of x's `neighbors` nearest
/// same-class points (Euclidean, clipped to class size - 1) and
/// u ~ U(0, 1). Original rows come first, unchanged and in order.
/// DataError if a class that is present has fewer than 2 rows.
Dataset smote_oversample(const Dataset& data, std::size_t neighbors, std::uint64_t seed);

/// Class-stratified fold assignment. Each class is shuffled and dealt
/// round-robin, so per-fold class counts differ by at most one. Returns the
/// validation row indices of each fold, ascending. DataError if folds < 2
/// or a present class has fewer rows than folds.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t folds,
                                                       std::uint64_t seed);

using ConfusionMatrix = std::array<std::array<std::size_t, kClassCount>, kClassCount>;  // [truth][pred]

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted);

/// Per-class F1; a class with no true and no predicted members scores 0.
std::array<double, kClassCount> per_class_f1(const ConfusionMatrix& cm);

/// Unweighted mean of per_class_f1 over all four classes.
double macro_f1(const ConfusionMatrix& cm);
double macro_f1(std::span<const int> truth, std::span<const int> predicted);

}  // namespace smr
