#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace smr {

/// R x Q single-frame distance matrix. Rows index reference frames, columns
/// index query frames, lower values mean more similar. Entries need not be
/// non-negative but must be finite. Immutable once constructed.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  /// Throws FormatError if values.size() != rows * cols, either dimension is
  /// zero, or an entry is NaN/Inf.
  DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                 std::vector<std::string> meta = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(std::size_t ref, std::size_t query) const noexcept {
    return values_[ref * cols_ + query];
  }

  std::span<const double> values() const noexcept { return values_; }
  const std::vector<std::string>& meta() const noexcept { return meta_; }

  /// Same entries, different tag set.
  DistanceMatrix with_meta(std::vector<std::string> meta) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> meta_;
};

/// True reference index g(j) for every query, plus a +-tolerance window.
struct GroundTruth {
  std::vector<std::size_t> mapping;
  std::size_t tolerance = 2;

  std::size_t queries() const noexcept { return mapping.size(); }

  bool is_correct(std::size_t query, std::size_t ref) const noexcept {
    const auto truth = mapping[query];
    const auto diff = ref > truth ? ref - truth : truth - ref;
    return diff <= tolerance;
  }

  /// ShapeError unless mapping covers every column of d and every g(j) < R.
  void validate_against(const DistanceMatrix& d) const;

  /// g(j) = j for j in [0, n).
  static GroundTruth identity(std::size_t n, std::size_t tolerance);
};

/// R x L window of D ending at query j. Column L-1 is query j, column 0 is
/// query j-L+1.
struct QuerySlice {
  std::size_t query = 0;
  std::size_t seq_len = 0;
  std::size_t rows = 0;
  std::vector<double> values;  // row-major, rows x seq_len
  bool normalized = false;

  double operator()(std::size_t r, std::size_t c) const noexcept {
    return values[r * seq_len + c];
  }
  double& operator()(std::size_t r, std::size_t c) noexcept { return values[r * seq_len + c]; }
};

/// Copy of D(:, j-L+1 .. j). RangeError if L == 0, j < L-1, j >= Q or L > R.
QuerySlice slice_query(const DistanceMatrix& d, std::size_t query, std::size_t seq_len);

/// Divides every entry by the slice's max |entry|. An all-zero slice is
/// returned unchanged (flag still set).
QuerySlice normalize_slice(QuerySlice slice);

enum class MatrixFormat { binary, csv };

/// ".csv" selects csv, anything else binary.
MatrixFormat format_from_path(const std::filesystem::path& path);

// Binary layout, little-endian:
//   "SMRM" | u16 version=1 | u32 R | u32 Q | R*Q float32 row-major
//   [ "TAGS" | u32 n | n bytes of '\n'-separated tags ]
// The tag trailer is optional; nothing else may follow the payload.
void write_matrix_binary(const DistanceMatrix& d, std::ostream& out);
DistanceMatrix read_matrix_binary(std::istream& in);

// CSV: R lines of Q comma-separated values, no header. Values are written
// in shortest round-trip form.
void write_matrix_csv(const DistanceMatrix& d, std::ostream& out);
DistanceMatrix read_matrix_csv(std::istream& in);

DistanceMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
DistanceMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const DistanceMatrix& d, const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const DistanceMatrix& d, const std::filesystem::path& path);

// Ground truth CSV: header "query,reference", one row per query. Rows may
// appear in any order but must cover 0..n-1 exactly once.
GroundTruth read_ground_truth(std::istream& in, std::size_t tolerance);
void write_ground_truth(const GroundTruth& gt, std::ostream& out);
GroundTruth load_ground_truth(const std::filesystem::path& path, std::size_t tolerance);
void save_ground_truth(const GroundTruth& gt, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

}  // namespace smr
