#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "smr/matrix.hpp"

namespace smr {

/// Length-L diagonals of a query slice: row i holds slice(i + l, l) for
/// l in [0, L). Shape (R - L + 1) x L.
struct DiagonalMatrix {
  std::size_t query = 0;
  std::size_t rows = 0;
  std::size_t seq_len = 0;
  std::vector<double> values;  // row-major

  double operator()(std::size_t i, std::size_t l) const noexcept { return values[i * seq_len + l]; }
};

struct SmoothingParams {
  std::size_t group_half_window = 2;  // W
  double epsilon = 1e-9;
};

inline constexpr std::size_t kAttributeCount = 4;

/// The four receptiveness attributes for one (query, rank) pair.
struct AttributeVector {
  std::size_t query = 0;
  std::size_t rank = 0;
  double a1 = 0.0;  // minimum sum rate
  double a2 = 0.0;  // minimum value rate
  double a3 = 0.0;  // global block sum rate
  double a4 = 0.0;  // global group sum rate

  std::array<double, kAttributeCount> values() const noexcept { return {a1, a2, a3, a4}; }
};

/// RangeError if the slice has fewer rows than columns.
DiagonalMatrix diagonal_entries(const QuerySlice& slice);

// Rank r is 0-based; r = 0 selects the lowest entry. Ties go to the lower row
// index. Each function throws RangeError when r has no row to select.

/// Sum over the first L-1 columns of the diagonal with the r-th lowest mean
/// over those columns, divided by (the same sum for the slice row with the
/// r-th lowest predecessor mean) + epsilon.
double minimum_sum_rate(const QuerySlice& slice, const DiagonalMatrix& diag, std::size_t rank,
                        const SmoothingParams& params);

/// r-th lowest entry of the current-query column divided by
/// (the last entry of the diagonal with the r-th lowest sum) + epsilon.
double minimum_value_rate(const QuerySlice& slice, const DiagonalMatrix& diag, std::size_t rank,
                          const SmoothingParams& params);

/// Diagonal rows are partitioned into consecutive blocks of L rows (the last
/// block may be shorter); every entry of a block becomes the block mean.
/// Returns the predecessor sum of the diagonal with the r-th lowest sum over
/// that row's smoothed sum. 0 if the smoothed sum is exactly 0.
/// RangeError if diag has fewer than L rows.
double global_block_sum_rate(const DiagonalMatrix& diag, std::size_t rank, std::size_t seq_len);

/// Like global_block_sum_rate with a centred window of +-W rows (clipped at
/// the borders, divided by the clipped window size) instead of blocks.
double global_group_sum_rate(const DiagonalMatrix& diag, std::size_t rank, const SmoothingParams& params);

/// Attributes for ranks 0..K-1. The slice must be normalized (DataError
/// otherwise). Rank 0 feeds the classifier, the others serve restoration.
std::vector<AttributeVector> extract_attributes(const QuerySlice& slice, std::size_t depth,
                                                const SmoothingParams& params);

/// slice_query + normalize_slice + extract_attributes.
std::vector<AttributeVector> query_attributes(const DistanceMatrix& d, std::size_t query,
                                              std::size_t seq_len, std::size_t depth,
                                              const SmoothingParams& params);

/// Attributes for every query j >= L-1, flattened in (query, rank) order.
std::vector<AttributeVector> matrix_attributes(const DistanceMatrix& d, std::size_t seq_len,
                                               std::size_t depth, const SmoothingParams& params);

}  // namespace smr
