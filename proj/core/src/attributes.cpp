#include "smr/attributes.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "smr/error.hpp"

namespace smr {

namespace {

// Row indices ordered by (key, index), first `count` only.
std::vector<std::size_t> lowest_rows(const std::vector<double>& key, std::size_t count) {
  std::vector<std::size_t> order(key.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto before = [&](std::size_t a, std::size_t b) {
    return key[a] < key[b] || (key[a] == key[b] && a < b);
  };
  count = std::min(count, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(), before);
  order.resize(count);
  return order;
}

double predecessor_sum(const double* row, std::size_t seq_len) {
  double s = 0.0;
  for (std::size_t l = 0; l + 1 < seq_len; ++l) s += row[l];
  return s;
}

double full_sum(const double* row, std::size_t seq_len) {
  double s = 0.0;
  for (std::size_t l = 0; l < seq_len; ++l) s += row[l];
  return s;
}

// Means over the first L-1 columns. With L == 1 there are no predecessor
// columns; every mean is 0 and the ordering falls back to row index.
std::vector<double> predecessor_means(const std::vector<double>& values, std::size_t rows,
                                      std::size_t seq_len) {
  std::vector<double> means(rows, 0.0);
  if (seq_len < 2) return means;
  const double n = static_cast<double>(seq_len - 1);
  for (std::size_t i = 0; i < rows; ++i) means[i] = predecessor_sum(&values[i * seq_len], seq_len) / n;
  return means;
}

std::vector<double> row_sums(const DiagonalMatrix& diag) {
  std::vector<double> sums(diag.rows);
  for (std::size_t i = 0; i < diag.rows; ++i) sums[i] = full_sum(&diag.values[i * diag.seq_len], diag.seq_len);
  return sums;
}

void require_rank(std::size_t rank, std::size_t available, const char* what) {
  if (rank >= available) {
    throw RangeError(std::string(what) + ": rank " + std::to_string(rank) + " but only " +
                     std::to_string(available) + " rows available");
  }
}

// Formula kernels, shared by the single-rank entry points and the batched
// extractor so both produce bit-identical results.

double sum_rate(const QuerySlice& slice, const DiagonalMatrix& diag, std::size_t diag_row,
                std::size_t slice_row, double eps) {
  const std::size_t L = diag.seq_len;
  const double num = predecessor_sum(&diag.values[diag_row * L], L);
  const double den = predecessor_sum(&slice.values[slice_row * L], L) + eps;
  return num / den;
}

double value_rate(double sorted_current, const DiagonalMatrix& diag, std::size_t diag_row, double eps) {
  return sorted_current / (diag(diag_row, diag.seq_len - 1) + eps);
}

double block_rate(const DiagonalMatrix& diag, std::size_t row, std::size_t seq_len) {
  const std::size_t begin = (row / seq_len) * seq_len;
  const std::size_t end = std::min(begin + seq_len, diag.rows);
  double total = 0.0;
  for (std::size_t m = begin; m < end; ++m) total += full_sum(&diag.values[m * diag.seq_len], diag.seq_len);
  const double mean = total / static_cast<double>((end - begin) * diag.seq_len);
  const double den = mean * static_cast<double>(diag.seq_len);
  if (den == 0.0) return 0.0;
  return predecessor_sum(&diag.values[row * diag.seq_len], diag.seq_len) / den;
}

double group_rate(const DiagonalMatrix& diag, std::size_t row, std::size_t half_window) {
  const std::size_t begin = row > half_window ? row - half_window : 0;
  const std::size_t end = std::min(row + half_window + 1, diag.rows);
  const double count = static_cast<double>(end - begin);
  double den = 0.0;
  for (std::size_t l = 0; l < diag.seq_len; ++l) {
    double col = 0.0;
    for (std::size_t m = begin; m < end; ++m) col += diag(m, l);
    den += col / count;
  }
  if (den == 0.0) return 0.0;
  return predecessor_sum(&diag.values[row * diag.seq_len], diag.seq_len) / den;
}

std::vector<double> current_column(const QuerySlice& slice) {
  std::vector<double> col(slice.rows);
  for (std::size_t r = 0; r < slice.rows; ++r) col[r] = slice(r, slice.seq_len - 1);
  return col;
}

double sorted_entry(std::vector<double> col, std::size_t rank) {
  std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(rank), col.end());
  return col[rank];
}

}  // namespace

DiagonalMatrix diagonal_entries(const QuerySlice& slice) {
  const std::size_t L = slice.seq_len;
  if (L == 0 || slice.rows < L) {
    throw RangeError("slice has " + std::to_string(slice.rows) + " rows, needs at least L=" +
                     std::to_string(L));
  }
  DiagonalMatrix diag;
  diag.query = slice.query;
  diag.seq_len = L;
  diag.rows = slice.rows - L + 1;
  diag.values.resize(diag.rows * L);
  for (std::size_t i = 0; i < diag.rows; ++i) {
    for (std::size_t l = 0; l < L; ++l) diag.values[i * L + l] = slice(i + l, l);
  }
  return diag;
}

double minimum_sum_rate(const QuerySlice& slice, const DiagonalMatrix& diag, std::size_t rank,
                        const SmoothingParams& params) {
  require_rank(rank, diag.rows, "minimum_sum_rate");
  const auto d_star = lowest_rows(predecessor_means(diag.values, diag.rows, diag.seq_len), rank + 1)[rank];
  const auto h_star = lowest_rows(predecessor_means(slice.values, slice.rows, slice.seq_len), rank + 1)[rank];
  return sum_rate(slice, diag, d_star, h_star, params.epsilon);
}

double minimum_value_rate(const QuerySlice& slice, const DiagonalMatrix& diag, std::size_t rank,
                          const SmoothingParams& params) {
  require_rank(rank, diag.rows, "minimum_value_rate");
  const auto i_star = lowest_rows(row_sums(diag), rank + 1)[rank];
  return value_rate(sorted_entry(current_column(slice), rank), diag, i_star, params.epsilon);
}

double global_block_sum_rate(const DiagonalMatrix& diag, std::size_t rank, std::size_t seq_len) {
  if (seq_len == 0 || seq_len != diag.seq_len) {
    throw RangeError("block length must equal the diagonal length L=" + std::to_string(diag.seq_len));
  }
  if (diag.rows < seq_len) {
    throw RangeError("global_block_sum_rate needs at least L=" + std::to_string(seq_len) +
                     " diagonal rows, got " + std::to_string(diag.rows));
  }
  require_rank(rank, diag.rows, "global_block_sum_rate");
  const auto i_star = lowest_rows(row_sums(diag), rank + 1)[rank];
  return block_rate(diag, i_star, seq_len);
}

double global_group_sum_rate(const DiagonalMatrix& diag, std::size_t rank, const SmoothingParams& params) {
  require_rank(rank, diag.rows, "global_group_sum_rate");
  const auto i_star = lowest_rows(row_sums(diag), rank + 1)[rank];
  return group_rate(diag, i_star, params.group_half_window);
}

std::vector<AttributeVector> extract_attributes(const QuerySlice& slice, std::size_t depth,
                                                const SmoothingParams& params) {
  if (!slice.normalized) throw DataError("extract_attributes requires a normalized slice");
  if (depth == 0) throw RangeError("rank depth must be >= 1");
  const auto diag = diagonal_entries(slice);
  require_rank(depth - 1, diag.rows, "extract_attributes");
  if (diag.rows < slice.seq_len) {
    throw RangeError("block attribute needs at least L=" + std::to_string(slice.seq_len) +
                     " diagonal rows, got " + std::to_string(diag.rows));
  }

  const auto d_order = lowest_rows(predecessor_means(diag.values, diag.rows, diag.seq_len), depth);
  const auto h_order = lowest_rows(predecessor_means(slice.values, slice.rows, slice.seq_len), depth);
  const auto s_order = lowest_rows(row_sums(diag), depth);

  auto column = current_column(slice);
  std::partial_sort(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(depth), column.end());

  std::vector<AttributeVector> out(depth);
  for (std::size_t r = 0; r < depth; ++r) {
    auto& a = out[r];
    a.query = slice.query;
    a.rank = r;
    a.a1 = sum_rate(slice, diag, d_order[r], h_order[r], params.epsilon);
    a.a2 = value_rate(column[r], diag, s_order[r], params.epsilon);
    a.a3 = block_rate(diag, s_order[r], slice.seq_len);
    a.a4 = group_rate(diag, s_order[r], params.group_half_window);
  }
  return out;
}

std::vector<AttributeVector> query_attributes(const DistanceMatrix& d, std::size_t query,
                                              std::size_t seq_len, std::size_t depth,
                                              const SmoothingParams& params) {
  return extract_attributes(normalize_slice(slice_query(d, query, seq_len)), depth, params);
}

std::vector<AttributeVector> matrix_attributes(const DistanceMatrix& d, std::size_t seq_len,
                                               std::size_t depth, const SmoothingParams& params) {
  std::vector<AttributeVector> out;
  if (seq_len == 0) throw RangeError("sequence length must be >= 1");
  if (d.cols() + 1 <= seq_len) return out;
  out.reserve((d.cols() - seq_len + 1) * depth);
  for (std::size_t j = seq_len - 1; j < d.cols(); ++j) {
    auto attrs = query_attributes(d, j, seq_len, depth, params);
    out.insert(out.end(), attrs.begin(), attrs.end());
  }
  return out;
}

}  // namespace smr
