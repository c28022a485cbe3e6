#include "smr/matrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "smr/error.hpp"

namespace smr {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'M', 'R', 'M'};
constexpr std::array<char, 4> kTagMagic{'T', 'A', 'G', 'S'};
constexpr std::uint16_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary matrix IO assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
bool get(std::istream& in, T& v) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) return false;
  std::memcpy(&v, buf, sizeof(T));
  return true;
}

std::string location(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", col " + std::to_string(col);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, const std::string& where) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw FormatError("unparsable value '" + std::string(field) + "' at " + where);
  }
  if (!std::isfinite(v)) throw FormatError("non-finite value at " + where);
  return v;
}

std::size_t parse_index(std::string_view field, const std::string& where) {
  field = trim(field);
  std::size_t v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw FormatError("unparsable index '" + std::string(field) + "' at " + where);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                               std::vector<std::string> meta)
    : rows_(rows), cols_(cols), values_(std::move(values)), meta_(std::move(meta)) {
  if (rows_ == 0 || cols_ == 0) throw FormatError("distance matrix needs R >= 1 and Q >= 1");
  if (values_.size() != rows_ * cols_) {
    throw FormatError("distance matrix payload has " + std::to_string(values_.size()) +
                      " entries, expected " + std::to_string(rows_ * cols_));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw FormatError("non-finite distance at " + location(k / cols_, k % cols_));
    }
  }
}

DistanceMatrix DistanceMatrix::with_meta(std::vector<std::string> meta) const {
  DistanceMatrix copy = *this;
  copy.meta_ = std::move(meta);
  return copy;
}

void GroundTruth::validate_against(const DistanceMatrix& d) const {
  if (mapping.size() != d.cols()) {
    throw ShapeError("ground truth covers " + std::to_string(mapping.size()) +
                     " queries, matrix has " + std::to_string(d.cols()));
  }
  for (std::size_t j = 0; j < mapping.size(); ++j) {
    if (mapping[j] >= d.rows()) {
      throw ShapeError("ground truth for query " + std::to_string(j) + " points at reference " +
                       std::to_string(mapping[j]) + " >= R=" + std::to_string(d.rows()));
    }
  }
}

GroundTruth GroundTruth::identity(std::size_t n, std::size_t tolerance) {
  GroundTruth gt;
  gt.mapping.resize(n);
  for (std::size_t j = 0; j < n; ++j) gt.mapping[j] = j;
  gt.tolerance = tolerance;
  return gt;
}

QuerySlice slice_query(const DistanceMatrix& d, std::size_t query, std::size_t seq_len) {
  if (seq_len == 0) throw RangeError("sequence length must be >= 1");
  if (query >= d.cols()) {
    throw RangeError("query " + std::to_string(query) + " out of range (Q=" +
                     std::to_string(d.cols()) + ")");
  }
  if (query + 1 < seq_len) {
    throw RangeError("query " + std::to_string(query) + " has fewer than L-1=" +
                     std::to_string(seq_len - 1) + " predecessors");
  }
  if (seq_len > d.rows()) {
    throw RangeError("sequence length " + std::to_string(seq_len) + " exceeds R=" +
                     std::to_string(d.rows()));
  }
  QuerySlice s;
  s.query = query;
  s.seq_len = seq_len;
  s.rows = d.rows();
  s.values.resize(d.rows() * seq_len);
  const std::size_t first = query + 1 - seq_len;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < seq_len; ++c) s(r, c) = d(r, first + c);
  }
  return s;
}

QuerySlice normalize_slice(QuerySlice slice) {
  double peak = 0.0;
  for (double v : slice.values) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : slice.values) v /= peak;
  }
  slice.normalized = true;
  return slice;
}

MatrixFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? MatrixFormat::csv : MatrixFormat::binary;
}

void write_matrix_binary(const DistanceMatrix& d, std::ostream& out) {
  if (d.rows() > UINT32_MAX || d.cols() > UINT32_MAX) {
    throw FormatError("matrix dimensions exceed the u32 header fields");
  }
  out.write(kMagic.data(), kMagic.size());
  put<std::uint16_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.cols()));
  const auto values = d.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto f = static_cast<float>(values[k]);
    if (!std::isfinite(f)) {
      throw FormatError("value at " + location(k / d.cols(), k % d.cols()) +
                        " overflows float32");
    }
    put<float>(out, f);
  }
  if (!d.meta().empty()) {
    std::string joined;
    for (std::size_t i = 0; i < d.meta().size(); ++i) {
      if (i) joined += '\n';
      joined += d.meta()[i];
    }
    out.write(kTagMagic.data(), kTagMagic.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(joined.size()));
    out.write(joined.data(), static_cast<std::streamsize>(joined.size()));
  }
  if (!out) throw IoError("failed writing binary matrix");
}

DistanceMatrix read_matrix_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("bad magic: expected SMRM");
  }
  std::uint16_t version = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  if (!get(in, version) || !get(in, rows) || !get(in, cols)) {
    throw FormatError("truncated header");
  }
  if (version != kVersion) throw FormatError("unsupported version " + std::to_string(version));
  if (rows == 0 || cols == 0) throw FormatError("header declares an empty matrix");

  const std::size_t n = std::size_t{rows} * cols;
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    float f = 0.0f;
    if (!get(in, f)) {
      throw FormatError("payload holds " + std::to_string(k) + " floats, header (R=" +
                        std::to_string(rows) + ",Q=" + std::to_string(cols) + ") needs " +
                        std::to_string(n));
    }
    if (!std::isfinite(f)) throw FormatError("non-finite distance at " + location(k / cols, k % cols));
    values[k] = f;
  }

  std::vector<std::string> meta;
  std::array<char, 4> tag{};
  in.read(tag.data(), tag.size());
  const auto got = in.gcount();
  if (got != 0) {
    if (got != 4 || tag != kTagMagic) throw FormatError("trailing bytes after payload");
    std::uint32_t len = 0;
    if (!get(in, len)) throw FormatError("truncated tag trailer");
    std::string joined(len, '\0');
    if (len && !in.read(joined.data(), len)) throw FormatError("truncated tag trailer");
    for (auto part : split(joined, '\n')) meta.emplace_back(part);
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after tags");
  }
  return DistanceMatrix(rows, cols, std::move(values), std::move(meta));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_matrix_csv(const DistanceMatrix& d, std::ostream& out) {
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (j) out << ',';
      out << format_double(d(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing csv matrix");
}

DistanceMatrix read_matrix_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw FormatError("row " + std::to_string(rows) + " has " + std::to_string(fields.size()) +
                        " values, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      values.push_back(parse_double(fields[c], location(rows, c)));
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("empty csv matrix");
  return DistanceMatrix(rows, cols, std::move(values));
}

DistanceMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return format == MatrixFormat::binary ? read_matrix_binary(in) : read_matrix_csv(in);
}

DistanceMatrix load_matrix(const std::filesystem::path& path) {
  return load_matrix(path, format_from_path(path));
}

void save_matrix(const DistanceMatrix& d, const std::filesystem::path& path, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (format == MatrixFormat::binary) {
    write_matrix_binary(d, out);
  } else {
    write_matrix_csv(d, out);
  }
}

void save_matrix(const DistanceMatrix& d, const std::filesystem::path& path) {
  save_matrix(d, path, format_from_path(path));
}

GroundTruth read_ground_truth(std::istream& in, std::size_t tolerance) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "query,reference") {
    throw FormatError("ground truth csv must start with header 'query,reference'");
  }
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw FormatError("line " + std::to_string(lineno) + ": expected 2 fields");
    const auto where = "line " + std::to_string(lineno);
    rows.emplace_back(parse_index(fields[0], where), parse_index(fields[1], where));
  }
  GroundTruth gt;
  gt.tolerance = tolerance;
  gt.mapping.assign(rows.size(), 0);
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [q, ref] : rows) {
    if (q >= rows.size() || seen[q]) {
      throw FormatError("ground truth queries must cover 0.." + std::to_string(rows.size() - 1) +
                        " exactly once (query " + std::to_string(q) + ")");
    }
    seen[q] = true;
    gt.mapping[q] = ref;
  }
  return gt;
}

void write_ground_truth(const GroundTruth& gt, std::ostream& out) {
  out << "query,reference\n";
  for (std::size_t j = 0; j < gt.mapping.size(); ++j) out << j << ',' << gt.mapping[j] << '\n';
}

GroundTruth load_ground_truth(const std::filesystem::path& path, std::size_t tolerance) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_ground_truth(in, tolerance);
}

void save_ground_truth(const GroundTruth& gt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_ground_truth(gt, out);
}

}  // namespace smr
