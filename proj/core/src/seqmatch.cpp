#include "smr/seqmatch.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <string>

#include "smr/error.hpp"

namespace smr {

namespace {

constexpr std::string_view kSeqTag = "seq:L=";

MatchSet rank_columns(const DistanceMatrix& m, std::size_t depth, std::size_t first_scored) {
  if (depth == 0) throw RangeError("rank depth must be >= 1");
  if (depth > m.rows()) {
    throw RangeError("rank depth " + std::to_string(depth) + " exceeds R=" + std::to_string(m.rows()));
  }
  MatchSet set(m.cols(), depth, first_scored);
  std::vector<std::size_t> order(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto before = [&](std::size_t a, std::size_t b) {
      const double va = m(a, j);
      const double vb = m(b, j);
      return va < vb || (va == vb && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(depth), order.end(), before);
    auto refs = set.ranked(j);
    auto scores = set.scores(j);
    for (std::size_t k = 0; k < depth; ++k) {
      refs[k] = order[k];
      scores[k] = m(order[k], j);
    }
  }
  return set;
}

}  // namespace

SeqDistanceMatrix sequence_match(const DistanceMatrix& d, std::size_t seq_len) {
  if (seq_len == 0) throw RangeError("sequence length must be >= 1");
  if (seq_len > std::min(d.rows(), d.cols())) {
    throw RangeError("sequence length " + std::to_string(seq_len) + " exceeds min(R, Q)=" +
                     std::to_string(std::min(d.rows(), d.cols())));
  }
  const std::size_t rows = d.rows();
  const std::size_t cols = d.cols();
  std::vector<double> out(rows * cols);
  const auto src = d.values();
  const double full = static_cast<double>(seq_len);

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t terms = std::min({i, j, seq_len - 1}) + 1;
      double sum = 0.0;
      std::size_t k = i * cols + j;
      for (std::size_t x = 0; x < terms; ++x, k -= cols + 1) sum += src[k];
      out[i * cols + j] = terms == seq_len ? sum : sum * (full / static_cast<double>(terms));
    }
  }

  auto meta = d.meta();
  meta.push_back(std::string(kSeqTag) + std::to_string(seq_len));
  SeqDistanceMatrix result;
  result.matrix = DistanceMatrix(rows, cols, std::move(out), std::move(meta));
  result.seq_len = seq_len;
  result.valid_from = seq_len - 1;
  return result;
}

SeqDistanceMatrix as_sequence_matrix(DistanceMatrix m) {
  for (const auto& tag : m.meta()) {
    if (tag.rfind(kSeqTag, 0) != 0) continue;
    std::size_t len = 0;
    const auto* first = tag.data() + kSeqTag.size();
    const auto* last = tag.data() + tag.size();
    auto [ptr, ec] = std::from_chars(first, last, len);
    if (ec != std::errc{} || ptr != last || len == 0) throw FormatError("malformed tag '" + tag + "'");
    SeqDistanceMatrix s;
    s.seq_len = len;
    s.valid_from = len - 1;
    s.matrix = std::move(m);
    return s;
  }
  throw FormatError("matrix carries no seq:L=<L> tag; not a sequence distance matrix");
}

MatchSet::MatchSet(std::size_t queries, std::size_t depth, std::size_t first_scored)
    : queries_(queries),
      depth_(depth),
      first_scored_(first_scored),
      refs_(queries * depth),
      scores_(queries * depth) {}

MatchSet best_matches(const DistanceMatrix& m, std::size_t depth) { return rank_columns(m, depth, 0); }

MatchSet best_matches(const SeqDistanceMatrix& m, std::size_t depth) {
  return rank_columns(m.matrix, depth, m.valid_from);
}

std::size_t column_argmin(const DistanceMatrix& m, std::size_t query) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < m.rows(); ++i) {
    if (m(i, query) < m(best, query)) best = i;
  }
  return best;
}

}  // namespace smr
