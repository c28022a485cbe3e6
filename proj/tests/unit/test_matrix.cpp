#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "smr/error.hpp"
#include "smr/matrix.hpp"

namespace {

std::string binary_header(std::uint32_t rows, std::uint32_t cols) {
  std::string s = "SMRM";
  const std::uint16_t version = 1;
  s.append(reinterpret_cast<const char*>(&version), 2);
  s.append(reinterpret_cast<const char*>(&rows), 4);
  s.append(reinterpret_cast<const char*>(&cols), 4);
  return s;
}

void append_floats(std::string& s, std::size_t n, float v = 0.5f) {
  for (std::size_t k = 0; k < n; ++k) s.append(reinterpret_cast<const char*>(&v), 4);
}

}  // namespace

TEST(DistanceMatrix, ParsesCsv) {
  std::istringstream in("0.1,0.2\n0.3,0.4");
  const auto d = smr::read_matrix_csv(in);
  ASSERT_EQ(d.rows(), 2u);
  ASSERT_EQ(d.cols(), 2u);
  EXPECT_EQ(std::vector<double>(d.values().begin(), d.values().end()), (std::vector<double>{0.1, 0.2, 0.3, 0.4}));
}

TEST(DistanceMatrix, RejectsRaggedCsv) {
  std::istringstream in("0.1,0.2\n0.3\n");
  EXPECT_THROW(smr::read_matrix_csv(in), smr::FormatError);
}

TEST(DistanceMatrix, CsvNonFiniteReportsLocation) {
  std::istringstream in("0.1,0.2\n0.3,nan\n");
  try {
    smr::read_matrix_csv(in);
    FAIL() << "expected FormatError";
  } catch (const smr::FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
    EXPECT_EQ(e.category(), "format");
  }
}

TEST(DistanceMatrix, ConstructorValidates) {
  EXPECT_THROW(smr::DistanceMatrix(2, 2, {1, 2, 3}), smr::FormatError);
  EXPECT_THROW(smr::DistanceMatrix(0, 2, {}), smr::FormatError);
  EXPECT_THROW(smr::DistanceMatrix(1, 2, {1, std::numeric_limits<double>::infinity()}), smr::FormatError);
  EXPECT_NO_THROW(smr::DistanceMatrix(1, 2, {-1.0, 0.0}));
}

TEST(DistanceMatrix, BinaryPayloadShorterThanHeader) {
  std::string bytes = binary_header(3, 2);
  append_floats(bytes, 5);
  std::istringstream in(bytes);
  EXPECT_THROW(smr::read_matrix_binary(in), smr::FormatError);
}

TEST(DistanceMatrix, BinaryRejectsBadMagicVersionAndTrailingBytes) {
  {
    std::string bytes = binary_header(1, 1);
    bytes[3] = 'X';
    append_floats(bytes, 1);
    std::istringstream in(bytes);
    EXPECT_THROW(smr::read_matrix_binary(in), smr::FormatError);
  }
  {
    std::string bytes = binary_header(1, 1);
    bytes[4] = 2;
    append_floats(bytes, 1);
    std::istringstream in(bytes);
    EXPECT_THROW(smr::read_matrix_binary(in), smr::FormatError);
  }
  {
    std::string bytes = binary_header(1, 1);
    append_floats(bytes, 2);
    std::istringstream in(bytes);
    EXPECT_THROW(smr::read_matrix_binary(in), smr::FormatError);
  }
}

TEST(DistanceMatrix, BinaryWithoutTrailerLoads) {
  std::string bytes = binary_header(2, 3);
  append_floats(bytes, 6, 0.25f);
  std::istringstream in(bytes);
  const auto d = smr::read_matrix_binary(in);
  EXPECT_EQ(d.rows(), 2u);
  EXPECT_EQ(d.cols(), 3u);
  EXPECT_EQ(d(1, 2), 0.25);
  EXPECT_TRUE(d.meta().empty());
}

TEST(DistanceMatrix, BinaryRoundTripIsBitExact) {
  smr::SplitMix64 rng(11);
  std::vector<double> v(100 * 100);
  for (auto& x : v) x = static_cast<float>(rng.uniform(-2.0, 5.0));
  const smr::DistanceMatrix d(100, 100, v, {"dataset:test", "method:random"});
  std::stringstream buf;
  smr::write_matrix_binary(d, buf);
  const auto back = smr::read_matrix_binary(buf);
  ASSERT_EQ(back.rows(), 100u);
  for (std::size_t k = 0; k < v.size(); ++k) {
    ASSERT_EQ(std::bit_cast<std::uint64_t>(back.values()[k]), std::bit_cast<std::uint64_t>(v[k])) << k;
  }
  EXPECT_EQ(back.meta(), d.meta());
}

TEST(DistanceMatrix, CsvRoundTripIsValueExact) {
  const auto d = oracle::random_matrix(20, 30, 5, -1.0, 1.0);
  std::stringstream buf;
  smr::write_matrix_csv(d, buf);
  const auto back = smr::read_matrix_csv(buf);
  for (std::size_t k = 0; k < d.values().size(); ++k) ASSERT_EQ(back.values()[k], d.values()[k]);
}

TEST(DistanceMatrix, FileRoundTripPicksFormatFromExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "smr_matrix_test";
  std::filesystem::create_directories(dir);
  const smr::DistanceMatrix d(2, 2, {0.5, 1.5, 2.5, 3.5});
  smr::save_matrix(d, dir / "m.csv");
  smr::save_matrix(d, dir / "m.smrm");
  EXPECT_EQ(smr::format_from_path(dir / "m.csv"), smr::MatrixFormat::csv);
  EXPECT_EQ(smr::format_from_path(dir / "m.smrm"), smr::MatrixFormat::binary);
  EXPECT_EQ(smr::load_matrix(dir / "m.csv")(1, 0), 2.5);
  EXPECT_EQ(smr::load_matrix(dir / "m.smrm")(1, 1), 3.5);
  EXPECT_THROW(smr::load_matrix(dir / "missing.smrm"), smr::IoError);
}

TEST(GroundTruth, CsvRoundTripAndValidation) {
  std::istringstream in("query,reference\n1,4\n0,2\n2,0\n");
  const auto gt = smr::read_ground_truth(in, 2);
  EXPECT_EQ(gt.mapping, (std::vector<std::size_t>{2, 4, 0}));
  EXPECT_TRUE(gt.is_correct(1, 2));
  EXPECT_TRUE(gt.is_correct(1, 6));
  EXPECT_FALSE(gt.is_correct(1, 7));
  EXPECT_FALSE(gt.is_correct(1, 1));

  std::stringstream out;
  smr::write_ground_truth(gt, out);
  const auto back = smr::read_ground_truth(out, 2);
  EXPECT_EQ(back.mapping, gt.mapping);

  std::istringstream bad_header("q,r\n0,0\n");
  EXPECT_THROW(smr::read_ground_truth(bad_header, 2), smr::FormatError);
  std::istringstream duplicate("query,reference\n0,0\n0,1\n");
  EXPECT_THROW(smr::read_ground_truth(duplicate, 2), smr::FormatError);

  const smr::DistanceMatrix d(3, 3, std::vector<double>(9, 1.0));
  EXPECT_NO_THROW(smr::GroundTruth::identity(3, 2).validate_against(d));
  EXPECT_THROW(smr::GroundTruth::identity(4, 2).validate_against(d), smr::ShapeError);
  EXPECT_THROW((smr::GroundTruth{{0, 1, 5}, 2}).validate_against(d), smr::ShapeError);
}

TEST(QuerySlice, CopiesTheWindowEndingAtTheQuery) {
  std::vector<double> v;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) v.push_back(std::abs(i - j));
  }
  const smr::DistanceMatrix d(3, 3, v);
  const auto s = smr::slice_query(d, 2, 2);
  EXPECT_FALSE(s.normalized);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(s(r, 0), d(r, 1));
    EXPECT_EQ(s(r, 1), d(r, 2));
  }
}

TEST(QuerySlice, RangeErrors) {
  const auto d = oracle::random_matrix(5, 6, 1);
  EXPECT_THROW(smr::slice_query(d, 0, 4), smr::RangeError);
  EXPECT_THROW(smr::slice_query(d, 5, 6), smr::RangeError);
  EXPECT_THROW(smr::slice_query(d, 6, 2), smr::RangeError);
  EXPECT_THROW(smr::slice_query(d, 3, 0), smr::RangeError);
  EXPECT_NO_THROW(smr::slice_query(d, 3, 4));
}

TEST(QuerySlice, MatchesElementwiseOracle) {
  const auto d = oracle::random_matrix(50, 50, 3);
  const auto s = smr::slice_query(d, 10, 4);
  const auto ref = oracle::slice(d, 10, 4);
  EXPECT_EQ(s.values, ref.v);
}

TEST(QuerySlice, IsAProjection) {
  const auto d = oracle::random_matrix(8, 8, 4);
  auto s = smr::slice_query(d, 5, 3);
  const double before = d(2, 4);
  s(2, 2) = 99.0;
  EXPECT_EQ(d(2, 4), before);
}

TEST(NormalizeSlice, ScalesByMaxAbsolute) {
  smr::QuerySlice s{0, 1, 3, {2.0, -4.0, 1.0}, false};
  const auto n = smr::normalize_slice(s);
  EXPECT_TRUE(n.normalized);
  EXPECT_EQ(n.values, (std::vector<double>{0.5, -1.0, 0.25}));
}

TEST(NormalizeSlice, AllZeroIsUnchanged) {
  smr::QuerySlice s{0, 2, 2, {0.0, 0.0, 0.0, 0.0}, false};
  const auto n = smr::normalize_slice(s);
  EXPECT_TRUE(n.normalized);
  EXPECT_EQ(n.values, s.values);
}

TEST(NormalizeSlice, PropertyMaxIsOneAndIdempotent) {
  smr::SplitMix64 rng(21);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t rows = 4 + rng.below(30);
    const std::size_t L = 1 + rng.below(4);
    smr::QuerySlice s{0, L, rows, std::vector<double>(rows * L), false};
    const double scale = std::exp(rng.uniform(-5.0, 5.0));
    for (auto& x : s.values) x = scale * rng.uniform(-1.0, 1.0);
    const auto n = smr::normalize_slice(s);
    double m = 0.0;
    for (double x : n.values) m = std::max(m, std::fabs(x));
    ASSERT_LE(std::fabs(m - 1.0), std::numeric_limits<double>::epsilon()) << t;

    auto again = n;
    again.normalized = false;
    const auto twice = smr::normalize_slice(again);
    for (std::size_t k = 0; k < n.values.size(); ++k) {
      ASSERT_LE(std::fabs(twice.values[k] - n.values[k]), std::numeric_limits<double>::epsilon());
    }
  }
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(smr::format_double(0.1), "0.1");
  EXPECT_EQ(smr::format_double(-2.5), "-2.5");
  smr::SplitMix64 rng(8);
  for (int t = 0; t < 1000; ++t) {
    const double v = rng.normal() * 1e3;
    ASSERT_EQ(std::stod(smr::format_double(v)), v);
  }
}
