#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "smr/attributes.hpp"
#include "smr/sampling.hpp"

namespace smr {

/// Adam + L2 training hyper-parameters. The L2 term is
/// 0.5 * l2_alpha * ||W||^2 / batch_rows (biases excluded), the usual
/// MLP-classifier parameterization.
struct TrainConfig {
  double learning_rate = 1e-4;
  double l2_alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t batch_size = 200;  // 0 selects full batch
  std::size_t max_epochs = 200;
  std::size_t patience = 20;     // epochs without min_delta improvement
  double min_delta = 1e-6;
  std::size_t smote_neighbors = 5;
  std::uint64_t seed = 0;
  std::vector<std::size_t> hidden{128, 128, 128};
};

/// Fully connected layer; weights are out x in, row-major.
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;
};

/// ReLU MLP with a 4-way softmax head. input_attributes selects which of
/// (a1, a2, a3, a4) feed the input layer, in order.
struct MlpModel {
  std::vector<std::size_t> layer_dims;
  std::vector<DenseLayer> layers;
  std::vector<std::size_t> input_attributes{0, 1, 2, 3};
  TrainConfig config;
  std::string trained_on;
  std::vector<double> loss_curve;

  std::size_t input_dim() const noexcept { return layer_dims.empty() ? 0 : layer_dims.front(); }
};

struct PredictionScores {
  std::size_t query = 0;
  std::array<double, 4> probs{};
  int predicted = 0;
  double removal_score = 0.0;  // P(y=1) + P(y=3): incorrect after sequence matching
  double keep_score() const noexcept { return probs[0] + probs[2]; }
};

/// He-uniform weights (bound sqrt(6 / fan_in)), zero biases.
MlpModel make_model(std::span<const std::size_t> layer_dims, std::uint64_t seed);
/// All weights and biases zero.
MlpModel zero_model(std::span<const std::size_t> layer_dims);

std::array<double, 4> forward(const MlpModel& model, std::span<const double> x);
PredictionScores predict_features(const MlpModel& model, std::span<const double> x, std::size_t query = 0);
PredictionScores predict(const MlpModel& model, const AttributeVector& attrs);

/// Projects an attribute vector onto the model's input attributes.
std::vector<double> model_input(const MlpModel& model, const AttributeVector& attrs);

/// Per-layer gradients, shaped like the model's layers.
struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> bias;
};

/// Mean cross-entropy over `data` plus the L2 term.
double loss(const MlpModel& model, const Dataset& data, double l2_alpha);
/// Loss and its analytic gradient by backpropagation.
double loss_and_gradient(const MlpModel& model, const Dataset& data, double l2_alpha, Gradients& grad);

/// Deterministic given cfg.seed. The model input width is data.dim.
/// DataError on an empty dataset, NumericsError if the loss goes non-finite.
MlpModel train(const Dataset& data, const TrainConfig& cfg,
               std::vector<std::size_t> input_attributes = {0, 1, 2, 3});

struct KFoldReport {
  std::vector<double> fold_f1;
  double mean_f1 = 0.0;
};

/// Stratified k-fold macro F1. SMOTE is applied to each training split only.
KFoldReport stratified_kfold_f1(const Dataset& data, const TrainConfig& cfg, std::size_t folds,
                                std::vector<std::size_t> input_attributes = {0, 1, 2, 3});

// JSON model document: {version, layerDims, inputAttributes, weights, biases,
// trainConfig, trainedOn, lossCurve}.
std::string model_to_json(const MlpModel& model);
MlpModel model_from_json(const std::string& text);
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

// Predictions CSV: "query,p0,p1,p2,p3,predicted,removal_score".
void write_predictions_csv(std::span<const PredictionScores> preds, std::ostream& out);
std::vector<PredictionScores> read_predictions_csv(std::istream& in);

}  // namespace smr
