#include "smr/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "smr/error.hpp"
#include "smr/rng.hpp"

namespace smr {

void Dataset::add(std::span<const double> x, int label) {
  if (dim == 0 && labels.empty()) dim = x.size();
  if (x.size() != dim) throw ShapeError("row has " + std::to_string(x.size()) + " features, dataset has " + std::to_string(dim));
  if (label < 0 || label >= kClassCount) throw DataError("label " + std::to_string(label) + " outside 0..3");
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.dim = dim;
  out.features.reserve(rows.size() * dim);
  out.labels.reserve(rows.size());
  for (auto r : rows) out.add(row(r), labels[r]);
  return out;
}

std::array<std::size_t, kClassCount> Dataset::histogram() const {
  std::array<std::size_t, kClassCount> counts{};
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// k nearest same-class members of each member, by (distance, index).
std::vector<std::vector<std::size_t>> nearest_neighbours(const Dataset& data,
                                                         const std::vector<std::size_t>& members,
                                                         std::size_t k) {
  std::vector<std::vector<std::size_t>> out(members.size());
  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t a = 0; a < members.size(); ++a) {
    cand.clear();
    for (std::size_t b = 0; b < members.size(); ++b) {
      if (a == b) continue;
      cand.emplace_back(squared_distance(data.row(members[a]), data.row(members[b])), members[b]);
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    for (std::size_t n = 0; n < k; ++n) out[a].push_back(cand[n].second);
  }
  return out;
}

}  // namespace

Dataset smote_oversample(const Dataset& data, std::size_t neighbors, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kClassCount> members;
  for (std::size_t i = 0; i < data.size(); ++i) members[static_cast<std::size_t>(data.labels[i])].push_back(i);

  std::size_t majority = 0;
  for (const auto& m : members) {
    if (m.size() == 1) throw DataError("SMOTE needs at least 2 samples in every present class");
    majority = std::max(majority, m.size());
  }

  Dataset out = data;
  SplitMix64 rng(seed);
  std::vector<double> synthetic(data.dim);
  for (int c = 0; c < kClassCount; ++c) {
    const auto& m = members[static_cast<std::size_t>(c)];
    if (m.empty() || m.size() == majority) continue;
    const std::size_t k = std::max<std::size_t>(1, std::min(neighbors, m.size() - 1));
    const auto knn = nearest_neighbours(data, m, k);
    const std::size_t need = majority - m.size();
    for (std::size_t s = 0; s < need; ++s) {
      const std::size_t base = s % m.size();
      const std::size_t nn = knn[base][rng.below(k)];
      const double u = rng.uniform();
      const auto x = data.row(m[base]);
      const auto y = data.row(nn);
      for (std::size_t f = 0; f < data.dim; ++f) synthetic[f] = x[f] + u * (y[f] - x[f]);
      out.add(synthetic, c);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t folds,
                                                       std::uint64_t seed) {
  if (folds < 2) throw DataError("stratified k-fold needs at least 2 folds");
  std::array<std::vector<std::size_t>, kClassCount> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);
  for (int c = 0; c < kClassCount; ++c) {
    const auto n = members[static_cast<std::size_t>(c)].size();
    if (n != 0 && n < folds) {
      throw DataError("class " + std::to_string(c) + " has " + std::to_string(n) + " samples, fewer than " +
                      std::to_string(folds) + " folds");
    }
  }

  SplitMix64 rng(seed);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t next = 0;  // carry the deal position across classes to even out fold sizes
  for (auto& m : members) {
    shuffle(m.begin(), m.end(), rng);
    for (auto idx : m) {
      out[next].push_back(idx);
      next = (next + 1) % folds;
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw ShapeError("truth and prediction lengths differ");
  ConfusionMatrix cm{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++cm[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
  return cm;
}

std::array<double, kClassCount> per_class_f1(const ConfusionMatrix& cm) {
  std::array<double, kClassCount> f1{};
  for (std::size_t c = 0; c < kClassCount; ++c) {
    std::size_t actual = 0;
    std::size_t predicted = 0;
    for (std::size_t k = 0; k < kClassCount; ++k) {
      actual += cm[c][k];
      predicted += cm[k][c];
    }
    const std::size_t tp = cm[c][c];
    const std::size_t denom = actual + predicted;
    f1[c] = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
  return f1;
}

double macro_f1(const ConfusionMatrix& cm) {
  const auto f1 = per_class_f1(cm);
  return std::accumulate(f1.begin(), f1.end(), 0.0) / kClassCount;
}

double macro_f1(std::span<const int> truth, std::span<const int> predicted) {
  return macro_f1(confusion(truth, predicted));
}

}  // namespace smr
