#include <benchmark/benchmark.h>

#include "smr/attributes.hpp"
#include "smr/eval.hpp"
#include "smr/mlp.hpp"
#include "smr/seqmatch.hpp"
#include "smr/synth.hpp"

namespace {

smr::Scenario scenario(std::size_t n) {
  smr::ScenarioSpec spec;
  spec.refs = spec.queries = n;
  spec.noise_sigma = 0.1;
  spec.seed = 1;
  return smr::generate(spec);
}

void BM_SequenceMatch(benchmark::State& state) {
  const auto s = scenario(static_cast<std::size_t>(state.range(0)));
  const auto L = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(smr::sequence_match(s.distances, L));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_SequenceMatch)->Args({600, 4})->Args({1000, 4})->Args({1000, 10})->Unit(benchmark::kMillisecond);

void BM_BestMatches(benchmark::State& state) {
  const auto s = scenario(1000);
  const auto seq = smr::sequence_match(s.distances, 4);
  for (auto _ : state) benchmark::DoNotOptimize(smr::best_matches(seq, 4));
}
BENCHMARK(BM_BestMatches)->Unit(benchmark::kMillisecond);

void BM_QueryAttributes(benchmark::State& state) {
  const auto s = scenario(static_cast<std::size_t>(state.range(0)));
  std::size_t j = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smr::query_attributes(s.distances, j, 4, 4, {2, 1e-9}));
    j = j + 1 < s.distances.cols() ? j + 1 : 3;
  }
}
BENCHMARK(BM_QueryAttributes)->Arg(600)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_MlpForward(benchmark::State& state) {
  const std::vector<std::size_t> dims{4, 128, 128, 128, 4};
  const auto model = smr::make_model(dims, 1);
  const std::vector<double> x{0.9, 1.2, 0.8, 0.95};
  for (auto _ : state) benchmark::DoNotOptimize(smr::forward(model, x));
}
BENCHMARK(BM_MlpForward)->Unit(benchmark::kMicrosecond);

void BM_PrCurve(benchmark::State& state) {
  const auto s = scenario(1000);
  const auto matches = smr::scored_matches(smr::best_matches(smr::sequence_match(s.distances, 4), 1));
  for (auto _ : state) {
    const auto c = smr::pr_curve(matches, s.truth);
    benchmark::DoNotOptimize(smr::auc_aoc(c, 1.0));
  }
}
BENCHMARK(BM_PrCurve)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
