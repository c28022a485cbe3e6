#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "smr/error.hpp"
#include "smr/mlp.hpp"
#include "smr/rng.hpp"

namespace {

const std::vector<std::size_t> kDims{4, 128, 128, 128, 4};

// 4-D Gaussian blobs centred on the unit axis vectors.
smr::Dataset blobs(std::size_t per_class, double sigma, std::uint64_t seed) {
  smr::SplitMix64 rng(seed);
  smr::Dataset d;
  d.dim = 4;
  for (std::size_t k = 0; k < per_class; ++k) {
    for (int c = 0; c < 4; ++c) {
      std::array<double, 4> x{};
      for (std::size_t a = 0; a < 4; ++a) x[a] = (a == static_cast<std::size_t>(c) ? 1.0 : 0.0) + rng.normal(0, sigma);
      d.add(x, c);
    }
  }
  return d;
}

double accuracy(const smr::MlpModel& m, const smr::Dataset& d) {
  std::size_t ok = 0;
  for (std::size_t k = 0; k < d.size(); ++k) ok += smr::predict_features(m, d.row(k)).predicted == d.labels[k];
  return static_cast<double>(ok) / static_cast<double>(d.size());
}

}  // namespace

TEST(Mlp, ZeroModelIsUniform) {
  const auto m = smr::zero_model(kDims);
  const std::vector<double> x{0.3, -2.0, 5.0, 0.1};
  const auto p = smr::forward(m, x);
  for (double v : p) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Mlp, ShapesFollowLayerDims) {
  const auto m = smr::make_model(kDims, 1);
  ASSERT_EQ(m.layers.size(), 4u);
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_EQ(m.layers[l].in, kDims[l]);
    EXPECT_EQ(m.layers[l].out, kDims[l + 1]);
    EXPECT_EQ(m.layers[l].weights.size(), kDims[l] * kDims[l + 1]);
    for (double b : m.layers[l].bias) EXPECT_EQ(b, 0.0);
    const double bound = std::sqrt(6.0 / static_cast<double>(kDims[l]));
    for (double w : m.layers[l].weights) EXPECT_LE(std::fabs(w), bound);
  }
  EXPECT_THROW(smr::make_model(std::vector<std::size_t>{4, 8, 3}, 1), smr::DataError);
}

TEST(Mlp, ForwardMatchesPlainLoops) {
  const auto m = smr::make_model(kDims, 3);
  smr::SplitMix64 rng(4);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(4);
    for (auto& v : x) v = rng.uniform(-2, 2);
    const auto a = smr::forward(m, x);
    const auto b = oracle::forward(m, x);
    for (std::size_t c = 0; c < 4; ++c) ASSERT_NEAR(a[c], b[c], 1e-12);
  }
}

TEST(Mlp, ProbabilitiesSumToOne) {
  const auto m = smr::make_model(kDims, 5);
  smr::SplitMix64 rng(6);
  for (int t = 0; t < 10000; ++t) {
    std::vector<double> x(4);
    for (auto& v : x) v = rng.uniform(-10, 10);
    const auto s = smr::predict_features(m, x, 0);
    double total = 0.0;
    for (double p : s.probs) {
      ASSERT_GE(p, 0.0);
      total += p;
    }
    ASSERT_NEAR(total, 1.0, 1e-6);
    ASSERT_NEAR(s.removal_score, s.probs[1] + s.probs[3], 1e-15);
    ASSERT_GE(s.removal_score, 0.0);
    ASSERT_LE(s.removal_score, 1.0);
  }
}

TEST(Mlp, LossMatchesOracle) {
  const auto m = smr::make_model(kDims, 8);
  const auto d = blobs(5, 0.3, 9);
  EXPECT_NEAR(smr::loss(m, d, 1e-3), oracle::loss(m, d, 1e-3), 1e-10);
}

TEST(Mlp, GradientMatchesCentralDifferences) {
  smr::SplitMix64 pick(12);
  for (std::uint64_t state = 0; state < 5; ++state) {
    auto m = smr::make_model(kDims, 100 + state);
    smr::SplitMix64 brng(200 + state);
    for (auto& layer : m.layers) {
      for (auto& b : layer.bias) b = brng.uniform(-0.1, 0.1);
    }
    const auto data = blobs(3, 0.5, 300 + state);
    smr::Gradients g;
    smr::loss_and_gradient(m, data, 1e-2, g);
    for (int k = 0; k < 10; ++k) {
      const std::size_t l = pick.below(m.layers.size());
      const bool bias = pick.below(4) == 0;
      auto& target = bias ? m.layers[l].bias : m.layers[l].weights;
      const std::size_t idx = pick.below(target.size());
      const double analytic = bias ? g.bias[l][idx] : g.weights[l][idx];
      const double h = 1e-4;
      const double saved = target[idx];
      target[idx] = saved + h;
      const double up = oracle::loss(m, data, 1e-2);
      target[idx] = saved - h;
      const double down = oracle::loss(m, data, 1e-2);
      target[idx] = saved;
      const double numeric = (up - down) / (2 * h);
      const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
      EXPECT_LE(std::fabs(analytic - numeric) / scale, 1e-4)
          << "state " << state << " layer " << l << (bias ? " bias " : " weight ") << idx << " analytic " << analytic
          << " numeric " << numeric;
    }
  }
}

TEST(Mlp, FitsSeparableBlobs) {
  const auto d = blobs(250, 0.05, 21);
  smr::TrainConfig cfg;
  cfg.seed = 4;
  const auto m = smr::train(d, cfg);
  EXPECT_LE(m.loss_curve.size(), 200u);
  EXPECT_GE(accuracy(m, d), 0.99);
  const std::vector<double> centroid{0, 0, 1, 0};
  EXPECT_EQ(smr::predict_features(m, centroid).predicted, 2);
}

TEST(Mlp, SingleClassZeroInput) {
  smr::Dataset d;
  d.dim = 4;
  for (int k = 0; k < 64; ++k) d.add(std::array<double, 4>{0, 0, 0, 0}, 3);
  // Zero input leaves only the output bias trainable; Adam moves it about
  // one learning rate per step, so the default 1e-4 cannot get there.
  smr::TrainConfig cfg;
  cfg.learning_rate = 1e-1;
  cfg.seed = 1;
  const auto m = smr::train(d, cfg);
  const auto p = smr::predict_features(m, std::vector<double>{0, 0, 0, 0});
  EXPECT_EQ(p.predicted, 3);
  EXPECT_GE(p.probs[3], 0.99);
}

TEST(Mlp, TrainingIsDeterministic) {
  const auto d = blobs(40, 0.2, 5);
  smr::TrainConfig cfg;
  cfg.max_epochs = 15;
  cfg.batch_size = 32;
  cfg.seed = 77;
  const auto a = smr::train(d, cfg);
  const auto b = smr::train(d, cfg);
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    EXPECT_EQ(a.layers[l].weights, b.layers[l].weights);
    EXPECT_EQ(a.layers[l].bias, b.layers[l].bias);
  }
  EXPECT_EQ(a.loss_curve, b.loss_curve);
  cfg.seed = 78;
  EXPECT_NE(smr::train(d, cfg).layers[0].weights, a.layers[0].weights);
}

TEST(Mlp, EarlyStoppingOnPlateau) {
  smr::Dataset d;
  d.dim = 4;
  for (int k = 0; k < 8; ++k) d.add(std::array<double, 4>{0, 0, 0, 0}, k % 4);
  smr::TrainConfig cfg;
  cfg.patience = 5;
  cfg.min_delta = 1.0;  // nothing counts as an improvement
  cfg.seed = 1;
  EXPECT_EQ(smr::train(d, cfg).loss_curve.size(), 6u);
}

TEST(Mlp, TrainingErrors) {
  smr::Dataset empty;
  empty.dim = 4;
  EXPECT_THROW(smr::train(empty, {}), smr::DataError);
  const auto d = blobs(10, 0.1, 1);
  smr::TrainConfig wild;
  wild.learning_rate = 1e300;
  wild.max_epochs = 50;
  EXPECT_THROW(smr::train(d, wild), smr::NumericsError);
}

TEST(Mlp, InputAttributeSubset) {
  const auto full = blobs(60, 0.05, 2);
  smr::Dataset two;
  two.dim = 2;
  for (std::size_t k = 0; k < full.size(); ++k) {
    const auto r = full.row(k);
    two.add(std::array<double, 2>{r[1], r[3]}, full.labels[k]);
  }
  smr::TrainConfig cfg;
  cfg.max_epochs = 5;
  const auto m = smr::train(two, cfg, {1, 3});
  EXPECT_EQ(m.input_dim(), 2u);
  smr::AttributeVector a;
  a.a1 = 9;
  a.a2 = 0.5;
  a.a3 = 9;
  a.a4 = 0.25;
  EXPECT_EQ(smr::model_input(m, a), (std::vector<double>{0.5, 0.25}));
  EXPECT_EQ(smr::predict(m, a).probs, smr::predict_features(m, std::vector<double>{0.5, 0.25}).probs);
}

TEST(Mlp, JsonRoundTripIsExact) {
  const auto d = blobs(20, 0.1, 3);
  smr::TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.seed = 5;
  auto m = smr::train(d, cfg);
  m.trained_on = "unit-test";
  const auto back = smr::model_from_json(smr::model_to_json(m));
  EXPECT_EQ(back.layer_dims, m.layer_dims);
  EXPECT_EQ(back.trained_on, "unit-test");
  EXPECT_EQ(back.loss_curve, m.loss_curve);
  EXPECT_EQ(back.config.seed, 5u);
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    EXPECT_EQ(back.layers[l].weights, m.layers[l].weights);
    EXPECT_EQ(back.layers[l].bias, m.layers[l].bias);
  }
}

TEST(Mlp, JsonNeedsVersion) {
  EXPECT_THROW(smr::model_from_json(R"({"layerDims":[4,4]})"), smr::FormatError);
  EXPECT_THROW(smr::model_from_json(R"({"version":99})"), smr::FormatError);
  EXPECT_THROW(smr::model_from_json("not json"), smr::FormatError);
}

TEST(Mlp, PredictionsCsvRoundTrip) {
  const auto m = smr::make_model(kDims, 2);
  std::vector<smr::PredictionScores> preds;
  for (std::size_t q = 3; q < 8; ++q) preds.push_back(smr::predict_features(m, std::vector<double>{0.1 * q, 1, 0, 2}, q));
  std::stringstream buf;
  smr::write_predictions_csv(preds, buf);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')), "query,p0,p1,p2,p3,predicted,removal_score");
  const auto back = smr::read_predictions_csv(buf);
  ASSERT_EQ(back.size(), preds.size());
  for (std::size_t k = 0; k < preds.size(); ++k) {
    EXPECT_EQ(back[k].query, preds[k].query);
    EXPECT_EQ(back[k].probs, preds[k].probs);
    EXPECT_EQ(back[k].predicted, preds[k].predicted);
    EXPECT_EQ(back[k].removal_score, preds[k].removal_score);
  }
}

TEST(KFold, SeparableBlobsScoreHigh) {
  const auto d = blobs(60, 0.05, 31);
  smr::TrainConfig cfg;
  cfg.seed = 2;
  cfg.batch_size = 32;
  cfg.max_epochs = 60;
  const auto r = smr::stratified_kfold_f1(d, cfg, 5);
  ASSERT_EQ(r.fold_f1.size(), 5u);
  EXPECT_GE(r.mean_f1, 0.95);
}

TEST(KFold, WellSeparatedTwoFoldsArePerfect) {
  const auto d = blobs(40, 0.01, 32);
  smr::TrainConfig cfg;
  cfg.seed = 3;
  cfg.batch_size = 16;
  cfg.max_epochs = 60;
  const auto r = smr::stratified_kfold_f1(d, cfg, 2);
  for (double f : r.fold_f1) EXPECT_DOUBLE_EQ(f, 1.0);
  EXPECT_DOUBLE_EQ(r.mean_f1, 1.0);
}
