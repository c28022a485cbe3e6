// Naive reference implementations used as test oracles. Each one is written
// straight from the definition with plain loops and full sorts, sharing no
// code with the library.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "smr/eval.hpp"
#include "smr/matrix.hpp"
#include "smr/mlp.hpp"
#include "smr/rng.hpp"

namespace oracle {

struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;
  double at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

inline smr::DistanceMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = 0.0,
                                         double hi = 1.0) {
  smr::SplitMix64 rng(seed);
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return smr::DistanceMatrix(rows, cols, std::move(v));
}

/// Sum of the L entries of D on the diagonal ending at (i, j); full support only.
inline double seq_cell(const smr::DistanceMatrix& d, std::size_t i, std::size_t j, std::size_t L) {
  double total = 0.0;
  for (std::size_t x = 0; x < L; ++x) total += d(i - x, j - x);
  return total;
}

inline Grid slice(const smr::DistanceMatrix& d, std::size_t j, std::size_t L) {
  Grid s{d.rows(), L, std::vector<double>(d.rows() * L)};
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < L; ++c) s.v[r * L + c] = d(r, j - L + 1 + c);
  }
  return s;
}

inline Grid normalized(Grid s) {
  double m = 0.0;
  for (double x : s.v) m = std::max(m, std::fabs(x));
  if (m > 0.0) {
    for (double& x : s.v) x /= m;
  }
  return s;
}

inline Grid from_slice(const smr::QuerySlice& s) { return {s.rows, s.seq_len, s.values}; }

inline Grid diagonals(const Grid& s) {
  const std::size_t L = s.cols;
  Grid dm{s.rows - L + 1, L, {}};
  for (std::size_t i = 0; i < dm.rows; ++i) {
    for (std::size_t l = 0; l < L; ++l) dm.v.push_back(s.at(i + l, l));
  }
  return dm;
}

/// Row index with the r-th lowest key; ties resolved towards the lower index.
inline std::size_t rth_lowest(const std::vector<double>& key, std::size_t r) {
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return idx.at(r);
}

inline double prefix_sum(const Grid& g, std::size_t row, std::size_t count) {
  double t = 0.0;
  for (std::size_t l = 0; l < count; ++l) t += g.at(row, l);
  return t;
}

inline double a1(const Grid& s, std::size_t r, double eps) {
  const std::size_t L = s.cols;
  const Grid dm = diagonals(s);
  const auto mean_prefix = [&](const Grid& g, std::size_t row) {
    return L > 1 ? prefix_sum(g, row, L - 1) / static_cast<double>(L - 1) : 0.0;
  };
  std::vector<double> diag_means;
  for (std::size_t i = 0; i < dm.rows; ++i) diag_means.push_back(mean_prefix(dm, i));
  std::vector<double> row_means;
  for (std::size_t i = 0; i < s.rows; ++i) row_means.push_back(mean_prefix(s, i));
  const std::size_t d_star = rth_lowest(diag_means, r);
  const std::size_t h_star = rth_lowest(row_means, r);
  return prefix_sum(dm, d_star, L - 1) / (prefix_sum(s, h_star, L - 1) + eps);
}

inline double a2(const Grid& s, std::size_t r, double eps) {
  const std::size_t L = s.cols;
  const Grid dm = diagonals(s);
  std::vector<double> last;
  for (std::size_t i = 0; i < s.rows; ++i) last.push_back(s.at(i, L - 1));
  std::sort(last.begin(), last.end());
  std::vector<double> sums;
  for (std::size_t i = 0; i < dm.rows; ++i) sums.push_back(prefix_sum(dm, i, L));
  const std::size_t i_star = rth_lowest(sums, r);
  return last.at(r) / (dm.at(i_star, L - 1) + eps);
}

inline double ratio_against(const Grid& dm, const Grid& smooth, std::size_t r) {
  const std::size_t L = dm.cols;
  std::vector<double> sums;
  for (std::size_t i = 0; i < dm.rows; ++i) sums.push_back(prefix_sum(dm, i, L));
  const std::size_t i_star = rth_lowest(sums, r);
  const double den = prefix_sum(smooth, i_star, L);
  return den == 0.0 ? 0.0 : prefix_sum(dm, i_star, L - 1) / den;
}

inline double a3(const Grid& s, std::size_t r) {
  const Grid dm = diagonals(s);
  const std::size_t L = dm.cols;
  Grid block = dm;
  for (std::size_t start = 0; start < dm.rows; start += L) {
    const std::size_t stop = std::min(dm.rows, start + L);
    double total = 0.0;
    for (std::size_t i = start; i < stop; ++i) total += prefix_sum(dm, i, L);
    const double mean = total / static_cast<double>((stop - start) * L);
    for (std::size_t i = start; i < stop; ++i) {
      for (std::size_t l = 0; l < L; ++l) block.v[i * L + l] = mean;
    }
  }
  return ratio_against(dm, block, r);
}

inline double a4(const Grid& s, std::size_t r, std::size_t W) {
  const Grid dm = diagonals(s);
  const std::size_t L = dm.cols;
  Grid group = dm;
  for (std::size_t i = 0; i < dm.rows; ++i) {
    const std::size_t lo = i >= W ? i - W : 0;
    const std::size_t hi = std::min(dm.rows - 1, i + W);
    for (std::size_t l = 0; l < L; ++l) {
      double t = 0.0;
      for (std::size_t k = lo; k <= hi; ++k) t += dm.at(k, l);
      group.v[i * L + l] = t / static_cast<double>(hi - lo + 1);
    }
  }
  return ratio_against(dm, group, r);
}

/// Plain-loop forward pass returning softmax probabilities.
inline std::array<double, 4> forward(const smr::MlpModel& m, const std::vector<double>& x) {
  std::vector<double> h = x;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const auto& layer = m.layers[l];
    std::vector<double> next(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double z = layer.bias[o];
      for (std::size_t k = 0; k < layer.in; ++k) z += layer.weights[o * layer.in + k] * h[k];
      next[o] = (l + 1 < m.layers.size()) ? std::max(0.0, z) : z;
    }
    h = std::move(next);
  }
  const double top = *std::max_element(h.begin(), h.end());
  std::array<double, 4> p{};
  double z = 0.0;
  for (std::size_t c = 0; c < 4; ++c) z += (p[c] = std::exp(h[c] - top));
  for (auto& v : p) v /= z;
  return p;
}

/// Mean cross-entropy + 0.5 * alpha * sum(W^2) / n, biases unpenalized.
inline double loss(const smr::MlpModel& m, const smr::Dataset& data, double alpha) {
  double ce = 0.0;
  const std::size_t n = data.labels.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> x(data.features.begin() + static_cast<std::ptrdiff_t>(k * data.dim),
                          data.features.begin() + static_cast<std::ptrdiff_t>((k + 1) * data.dim));
    ce -= std::log(forward(m, x)[static_cast<std::size_t>(data.labels[k])]);
  }
  double w2 = 0.0;
  for (const auto& layer : m.layers) {
    for (double w : layer.weights) w2 += w * w;
  }
  return ce / static_cast<double>(n) + 0.5 * alpha * w2 / static_cast<double>(n);
}

struct Point {
  double threshold;
  double precision;
  double recall;
};

/// Every distinct confidence as a threshold, each evaluated by a full pass.
inline std::vector<Point> pr_points(const std::vector<smr::ScoredMatch>& matches, const smr::GroundTruth& gt) {
  std::vector<double> thresholds;
  for (const auto& m : matches) {
    if (m.ref) thresholds.push_back(m.confidence);
  }
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::vector<Point> out;
  for (double t : thresholds) {
    double tp = 0.0, fp = 0.0, fn = 0.0;
    for (const auto& m : matches) {
      const bool accepted = m.ref.has_value() && m.confidence >= t;
      if (accepted && std::llabs(static_cast<long long>(*m.ref) - static_cast<long long>(gt.mapping[m.query])) <=
                          static_cast<long long>(gt.tolerance)) {
        tp += 1.0;
      } else if (accepted) {
        fp += 1.0;
      } else {
        fn += 1.0;
      }
    }
    out.push_back({t, tp + fp > 0 ? tp / (tp + fp) : 0.0, tp + fn > 0 ? tp / (tp + fn) : 0.0});
  }
  return out;
}

/// Area under precision over recall in [0, max recall]: the first point's
/// precision back to recall 0, trapezoids after that.
inline double auc(const std::vector<Point>& pts) {
  if (pts.empty()) return 0.0;
  double area = pts[0].recall * pts[0].precision;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    area += 0.5 * (pts[k].precision + pts[k - 1].precision) * (pts[k].recall - pts[k - 1].recall);
  }
  return area;
}

}  // namespace oracle
