#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "smr/error.hpp"
#include "smr/experiment.hpp"
#include "smr/filters.hpp"
#include "smr/rng.hpp"

namespace {

// Query q ranks references q, q+1, q+2, ... with scores 0, 1, 2, ...
smr::MatchSet ladder(std::size_t queries, std::size_t depth, std::size_t first_scored = 0) {
  smr::MatchSet m(queries, depth, first_scored);
  for (std::size_t q = 0; q < queries; ++q) {
    for (std::size_t r = 0; r < depth; ++r) {
      m.ranked(q)[r] = q + r;
      m.scores(q)[r] = static_cast<double>(r);
    }
  }
  return m;
}

std::vector<smr::PredictionScores> scores(const std::vector<double>& removal, std::size_t first = 0) {
  std::vector<smr::PredictionScores> out;
  for (std::size_t k = 0; k < removal.size(); ++k) {
    smr::PredictionScores p;
    p.query = first + k;
    p.probs = {1.0 - removal[k], removal[k], 0.0, 0.0};
    p.removal_score = removal[k];
    p.predicted = removal[k] >= 0.5 ? 1 : 0;
    out.push_back(p);
  }
  return out;
}

std::set<std::size_t> removed_set(const std::vector<smr::MatchDecision>& d) {
  std::set<std::size_t> out;
  for (const auto& x : d) {
    if (x.verdict == smr::Verdict::removed) out.insert(x.query);
  }
  return out;
}

}  // namespace

TEST(Remove, TauOneKeepsEverything) {
  const auto m = ladder(5, 1);
  smr::FilterConfig cfg;
  cfg.trust_threshold = 1.0;
  const auto d = smr::remove_matches(m, scores({0.0, 0.3, 0.99, 0.999999, 0.5}), cfg);
  for (const auto& x : d) {
    EXPECT_EQ(x.verdict, smr::Verdict::kept);
    EXPECT_EQ(x.final_ref, x.original_ref);
  }
}

TEST(Remove, TauZeroRemovesEverything) {
  const auto m = ladder(5, 1);
  smr::FilterConfig cfg;
  cfg.trust_threshold = 0.0;
  const auto d = smr::remove_matches(m, scores({0.0, 0.3, 0.99, 0.2, 0.5}), cfg);
  for (const auto& x : d) {
    EXPECT_EQ(x.verdict, smr::Verdict::removed);
    EXPECT_FALSE(x.final_ref.has_value());
  }
}

TEST(Remove, ThresholdIsInclusive) {
  const auto m = ladder(3, 1);
  smr::FilterConfig cfg;
  cfg.trust_threshold = 0.5;
  const auto d = smr::remove_matches(m, scores({0.49, 0.5, 0.51}), cfg);
  EXPECT_EQ(removed_set(d), (std::set<std::size_t>{1, 2}));
  EXPECT_EQ(d[1].removal_score, 0.5);
}

TEST(Remove, UnscoredQueriesPassThrough) {
  const auto m = ladder(6, 1, 3);
  smr::FilterConfig cfg;
  cfg.trust_threshold = 0.0;
  const auto d = smr::remove_matches(m, scores({0.9, 0.9, 0.9}, 3), cfg);
  ASSERT_EQ(d.size(), 6u);
  EXPECT_EQ(removed_set(d), (std::set<std::size_t>{3, 4, 5}));
}

TEST(Remove, MissingPredictionIsCoverageError) {
  const auto m = ladder(4, 1);
  EXPECT_THROW(smr::remove_matches(m, scores({0.1, 0.2, 0.3}), {}), smr::CoverageError);
}

TEST(Remove, RemovedSetShrinksAsTauGrows) {
  smr::SplitMix64 rng(17);
  std::vector<double> removal(300);
  for (auto& v : removal) v = rng.uniform();
  const auto m = ladder(300, 1);
  const auto preds = scores(removal);
  std::set<std::size_t> previous;
  bool first = true;
  for (double tau = 0.0; tau <= 1.0 + 1e-12; tau += 0.05) {
    smr::FilterConfig cfg;
    cfg.trust_threshold = std::min(tau, 1.0);
    const auto now = removed_set(smr::remove_matches(m, preds, cfg));
    if (!first) EXPECT_TRUE(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
    previous = now;
    first = false;
  }
}

TEST(Restore, PicksBestCandidateAboveRho) {
  const auto m = ladder(1, 4);
  smr::FilterConfig cfg;
  cfg.trust_threshold = 0.5;
  cfg.restoration_depth = 3;
  cfg.restoration_threshold = 0.9;
  const auto removed = smr::remove_matches(m, scores({0.8}), cfg);
  const std::vector<double> keep{0.2, 0.95, 0.4};
  const auto out = smr::restore_matches(removed, m, [&](std::size_t, std::size_t rank) { return keep.at(rank - 1); }, cfg);
  ASSERT_EQ(out[0].verdict, smr::Verdict::restored);
  EXPECT_EQ(out[0].final_ref, m.ranked(0)[2]);
  EXPECT_EQ(out[0].original_ref, m.ranked(0)[0]);
  EXPECT_EQ(out[0].restore_scores, keep);
}

TEST(Restore, TiesGoToLowerRank) {
  const auto m = ladder(1, 4);
  smr::FilterConfig cfg;
  cfg.restoration_threshold = 0.5;
  const auto removed = smr::remove_matches(m, scores({0.9}), cfg);
  const auto out = smr::restore_matches(removed, m, [](std::size_t, std::size_t) { return 0.7; }, cfg);
  EXPECT_EQ(out[0].final_ref, m.ranked(0)[1]);
}

TEST(Restore, UnreachableRhoRestoresNothing) {
  const auto m = ladder(20, 4);
  smr::FilterConfig cfg;
  cfg.restoration_threshold = std::nextafter(1.0, 2.0);
  std::vector<double> removal(20, 0.9);
  const auto removed = smr::remove_matches(m, scores(removal), cfg);
  const auto out = smr::restore_matches(removed, m, [](std::size_t, std::size_t) { return 1.0; }, cfg);
  for (std::size_t q = 0; q < 20; ++q) {
    EXPECT_EQ(out[q].verdict, removed[q].verdict);
    EXPECT_EQ(out[q].final_ref, removed[q].final_ref);
  }
}

TEST(Restore, KeptMatchesUntouched) {
  const auto m = ladder(10, 4);
  smr::FilterConfig cfg;
  cfg.restoration_threshold = 0.0;
  std::vector<double> removal{0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6, 0.0, 1.0};
  const auto removed = smr::remove_matches(m, scores(removal), cfg);
  std::size_t calls = 0;
  const auto out = smr::restore_matches(
      removed, m,
      [&](std::size_t q, std::size_t) {
        ++calls;
        EXPECT_GE(removal[q], 0.5);
        return 0.5;
      },
      cfg);
  EXPECT_EQ(calls, 5u * cfg.restoration_depth);
  for (std::size_t q = 0; q < 10; ++q) {
    if (removal[q] < 0.5) {
      EXPECT_EQ(out[q].verdict, smr::Verdict::kept);
      EXPECT_EQ(out[q].final_ref, q);
    } else {
      EXPECT_EQ(out[q].verdict, smr::Verdict::restored);
    }
  }
}

TEST(Restore, ShallowMatchSetIsRangeError) {
  const auto m = ladder(2, 3);
  smr::FilterConfig cfg;
  cfg.restoration_depth = 3;
  const auto removed = smr::remove_matches(m, scores({0.9, 0.9}), cfg);
  EXPECT_THROW(smr::restore_matches(removed, m, [](std::size_t, std::size_t) { return 1.0; }, cfg), smr::RangeError);
}

TEST(Restore, ModelOverloadUsesKeepConfidence) {
  const std::vector<std::size_t> dims{4, 8, 4};
  auto model = smr::zero_model(dims);
  // Output bias favours class 2 -> keep-confidence near 1.
  model.layers.back().bias = {0.0, 0.0, 20.0, 0.0};
  const auto m = ladder(1, 4);
  smr::FilterConfig cfg;
  cfg.restoration_threshold = 0.99;
  const auto removed = smr::remove_matches(m, scores({0.9}), cfg);
  const auto out = smr::restore_matches(
      removed, m, [](std::size_t q, std::size_t r) { return smr::AttributeVector{q, r, 0, 0, 0, 0}; }, model, cfg);
  EXPECT_EQ(out[0].verdict, smr::Verdict::restored);
  EXPECT_EQ(out[0].final_ref, m.ranked(0)[1]);
}

TEST(Decisions, CsvRoundTrip) {
  const auto m = ladder(6, 4);
  smr::FilterConfig cfg;
  cfg.restoration_threshold = 0.6;
  const auto removed = smr::remove_matches(m, scores({0.1, 0.9, 0.2, 0.8, 0.3, 0.75}), cfg);
  const auto out = smr::restore_matches(
      removed, m, [](std::size_t q, std::size_t r) { return q == 1 ? 0.3 : 0.2 * static_cast<double>(r); }, cfg);
  std::stringstream buf;
  smr::write_decisions_csv(out, buf);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')), "query,original_ref,verdict,final_ref,removal_score");
  const auto back = smr::read_decisions_csv(buf);
  ASSERT_EQ(back.size(), out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    EXPECT_EQ(back[k].query, out[k].query);
    EXPECT_EQ(back[k].original_ref, out[k].original_ref);
    EXPECT_EQ(back[k].verdict, out[k].verdict);
    EXPECT_EQ(back[k].final_ref, out[k].final_ref);
    EXPECT_EQ(back[k].removal_score, out[k].removal_score);
  }
  EXPECT_EQ(back[1].verdict, smr::Verdict::removed);
  EXPECT_EQ(back[3].verdict, smr::Verdict::restored);
}

TEST(Decisions, CsvErrors) {
  std::stringstream bad_header("q,o,v,f,s\n");
  EXPECT_THROW(smr::read_decisions_csv(bad_header), smr::FormatError);
  std::stringstream bad_verdict("query,original_ref,verdict,final_ref,removal_score\n0,0,maybe,0,0.1\n");
  EXPECT_THROW(smr::read_decisions_csv(bad_verdict), smr::FormatError);
  std::stringstream inconsistent("query,original_ref,verdict,final_ref,removal_score\n0,0,removed,3,0.9\n");
  EXPECT_THROW(smr::read_decisions_csv(inconsistent), smr::FormatError);
}

TEST(OracleFilter, RemovesExactlyTheIncorrectAfterClasses) {
  smr::ScenarioSpec spec;
  spec.refs = spec.queries = 160;
  spec.noise_sigma = 0.12;
  spec.bursts = {{40, 50, 0.6, 2}};
  spec.alias_bands = {{100, 0.7, 110, 125, 1, 1}};
  spec.seed = 4;
  smr::RunConfig cfg;
  const auto p = smr::prepare(smr::generate(spec), cfg);
  const auto ev = smr::evaluate_with_oracle(p, cfg);
  std::size_t incorrect_after = 0;
  for (const auto& l : p.labels) incorrect_after += (l.label == 1 || l.label == 3) ? 1 : 0;
  EXPECT_GT(incorrect_after, 0u);
  EXPECT_EQ(ev.removed, incorrect_after);
  EXPECT_EQ(ev.false_positives_removed, ev.false_positives_before);
  EXPECT_EQ(ev.true_positives_removed, 0u);
  EXPECT_EQ(ev.filtered.precision, 1.0);
  EXPECT_EQ(ev.restored.precision, 1.0);
}
