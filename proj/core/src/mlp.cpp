#include "smr/mlp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "smr/error.hpp"
#include "smr/rng.hpp"

namespace smr {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;
using ConstMatMap = Eigen::Map<const Mat>;
using ConstVecMap = Eigen::Map<const Vec>;

constexpr int kModelVersion = 1;

ConstMatMap weights_of(const DenseLayer& layer) {
  return ConstMatMap(layer.weights.data(), static_cast<Eigen::Index>(layer.out), static_cast<Eigen::Index>(layer.in));
}

ConstVecMap bias_of(const DenseLayer& layer) {
  return ConstVecMap(layer.bias.data(), static_cast<Eigen::Index>(layer.out));
}

void check_dims(std::span<const std::size_t> dims) {
  if (dims.size() < 2) throw DataError("an MLP needs at least an input and an output layer");
  if (dims.back() != static_cast<std::size_t>(kClassCount)) throw DataError("the output layer must have 4 units");
  for (auto d : dims) {
    if (d == 0) throw DataError("layer widths must be positive");
  }
}

MlpModel empty_model(std::span<const std::size_t> dims) {
  check_dims(dims);
  MlpModel m;
  m.layer_dims.assign(dims.begin(), dims.end());
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer;
    layer.in = dims[l];
    layer.out = dims[l + 1];
    layer.weights.assign(layer.in * layer.out, 0.0);
    layer.bias.assign(layer.out, 0.0);
    m.layers.push_back(std::move(layer));
  }
  m.input_attributes.clear();
  for (std::size_t k = 0; k < std::min<std::size_t>(dims.front(), kAttributeCount); ++k) m.input_attributes.push_back(k);
  return m;
}

// Row-wise log-softmax in place.
void log_softmax_rows(Mat& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double peak = z.row(i).maxCoeff();
    const double lse = peak + std::log((z.row(i).array() - peak).exp().sum());
    z.row(i).array() -= lse;
  }
}

// Forward pass over a batch. acts[0] is the input, acts[l] the post-ReLU
// activation of layer l; the returned matrix holds output log-probabilities.
Mat forward_batch(const MlpModel& model, const Mat& x, std::vector<Mat>* acts) {
  Mat a = x;
  const std::size_t n_layers = model.layers.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    if (acts) acts->push_back(a);
    const auto& layer = model.layers[l];
    Mat z = a * weights_of(layer).transpose();
    z.rowwise() += bias_of(layer).transpose();
    if (l + 1 < n_layers) {
      a = z.cwiseMax(0.0);
    } else {
      a = std::move(z);
    }
  }
  log_softmax_rows(a);
  return a;
}

Mat as_matrix(const Dataset& data) {
  return ConstMatMap(data.features.data(), static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(data.dim));
}

double l2_term(const MlpModel& model, double l2_alpha, double rows) {
  double sq = 0.0;
  for (const auto& layer : model.layers) sq += weights_of(layer).squaredNorm();
  return 0.5 * l2_alpha * sq / rows;
}

double batch_loss_and_gradient(const MlpModel& model, const Mat& x, std::span<const int> labels, double l2_alpha,
                               Gradients& grad) {
  const auto n = static_cast<double>(labels.size());
  std::vector<Mat> acts;
  Mat logp = forward_batch(model, x, &acts);

  double ce = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) ce -= logp(static_cast<Eigen::Index>(i), labels[i]);
  ce /= n;

  Mat delta = logp.array().exp().matrix();  // softmax probabilities
  for (std::size_t i = 0; i < labels.size(); ++i) delta(static_cast<Eigen::Index>(i), labels[i]) -= 1.0;
  delta /= n;

  const std::size_t n_layers = model.layers.size();
  grad.weights.resize(n_layers);
  grad.bias.resize(n_layers);
  for (std::size_t l = n_layers; l-- > 0;) {
    const auto& layer = model.layers[l];
    const auto w = weights_of(layer);
    Mat gw = delta.transpose() * acts[l];
    gw += (l2_alpha / n) * w;
    Vec gb = delta.colwise().sum().transpose();
    grad.weights[l].assign(gw.data(), gw.data() + gw.size());
    grad.bias[l].assign(gb.data(), gb.data() + gb.size());
    if (l > 0) {
      Mat upstream = delta * w;
      delta = (acts[l].array() > 0.0).select(upstream, 0.0);
    }
  }
  return ce + l2_term(model, l2_alpha, n);
}

struct AdamState {
  std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
  std::size_t step = 0;

  explicit AdamState(const MlpModel& model) {
    for (const auto& layer : model.layers) {
      m_w.emplace_back(layer.weights.size(), 0.0);
      v_w.emplace_back(layer.weights.size(), 0.0);
      m_b.emplace_back(layer.bias.size(), 0.0);
      v_b.emplace_back(layer.bias.size(), 0.0);
    }
  }
};

void adam_update(std::vector<double>& param, const std::vector<double>& g, std::vector<double>& m,
                 std::vector<double>& v, const TrainConfig& cfg, double step_size) {
  for (std::size_t k = 0; k < param.size(); ++k) {
    m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g[k];
    v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g[k] * g[k];
    param[k] -= step_size * m[k] / (std::sqrt(v[k]) + cfg.adam_eps);
  }
}

void adam_step(MlpModel& model, const Gradients& grad, AdamState& state, const TrainConfig& cfg) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double step_size =
      cfg.learning_rate * std::sqrt(1.0 - std::pow(cfg.beta2, t)) / (1.0 - std::pow(cfg.beta1, t));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    adam_update(model.layers[l].weights, grad.weights[l], state.m_w[l], state.v_w[l], cfg, step_size);
    adam_update(model.layers[l].bias, grad.bias[l], state.m_b[l], state.v_b[l], cfg, step_size);
  }
}

void validate_config(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || cfg.l2_alpha < 0.0 || !(cfg.beta1 > 0.0 && cfg.beta1 < 1.0) ||
      !(cfg.beta2 > 0.0 && cfg.beta2 < 1.0) || !(cfg.adam_eps > 0.0) || cfg.max_epochs == 0) {
    throw ConfigError("invalid training configuration");
  }
}

}  // namespace

MlpModel make_model(std::span<const std::size_t> layer_dims, std::uint64_t seed) {
  MlpModel m = empty_model(layer_dims);
  SplitMix64 rng(seed);
  for (auto& layer : m.layers) {
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.in));
    for (double& w : layer.weights) w = rng.uniform(-bound, bound);
  }
  return m;
}

MlpModel zero_model(std::span<const std::size_t> layer_dims) { return empty_model(layer_dims); }

std::array<double, 4> forward(const MlpModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw ShapeError("model expects " + std::to_string(model.input_dim()) + " inputs, got " + std::to_string(x.size()));
  }
  Mat row = ConstMatMap(x.data(), 1, static_cast<Eigen::Index>(x.size()));
  const Mat logp = forward_batch(model, row, nullptr);
  std::array<double, 4> probs{};
  for (int c = 0; c < kClassCount; ++c) probs[static_cast<std::size_t>(c)] = std::exp(logp(0, c));
  return probs;
}

PredictionScores predict_features(const MlpModel& model, std::span<const double> x, std::size_t query) {
  PredictionScores p;
  p.query = query;
  p.probs = forward(model, x);
  p.predicted = static_cast<int>(std::max_element(p.probs.begin(), p.probs.end()) - p.probs.begin());
  p.removal_score = std::clamp(p.probs[1] + p.probs[3], 0.0, 1.0);
  return p;
}

std::vector<double> model_input(const MlpModel& model, const AttributeVector& attrs) {
  const auto all = attrs.values();
  std::vector<double> x;
  x.reserve(model.input_attributes.size());
  for (auto idx : model.input_attributes) x.push_back(all.at(idx));
  return x;
}

PredictionScores predict(const MlpModel& model, const AttributeVector& attrs) {
  return predict_features(model, model_input(model, attrs), attrs.query);
}

double loss(const MlpModel& model, const Dataset& data, double l2_alpha) {
  if (data.size() == 0) throw DataError("loss over an empty dataset");
  const Mat logp = forward_batch(model, as_matrix(data), nullptr);
  double ce = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) ce -= logp(static_cast<Eigen::Index>(i), data.labels[i]);
  const auto n = static_cast<double>(data.size());
  return ce / n + l2_term(model, l2_alpha, n);
}

double loss_and_gradient(const MlpModel& model, const Dataset& data, double l2_alpha, Gradients& grad) {
  if (data.size() == 0) throw DataError("gradient over an empty dataset");
  return batch_loss_and_gradient(model, as_matrix(data), data.labels, l2_alpha, grad);
}

MlpModel train(const Dataset& data, const TrainConfig& cfg, std::vector<std::size_t> input_attributes) {
  validate_config(cfg);
  if (data.size() == 0 || data.dim == 0) throw DataError("cannot train on an empty dataset");
  if (input_attributes.size() != data.dim) {
    throw ShapeError("input attribute list has " + std::to_string(input_attributes.size()) +
                     " entries, dataset has " + std::to_string(data.dim) + " features");
  }
  for (double v : data.features) {
    if (!std::isfinite(v)) throw DataError("non-finite training feature");
  }

  std::vector<std::size_t> dims{data.dim};
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(kClassCount);
  MlpModel model = make_model(dims, cfg.seed);
  model.input_attributes = std::move(input_attributes);
  model.config = cfg;

  SplitMix64 rng(cfg.seed ^ 0x5DEECE66DULL);
  AdamState adam(model);
  Gradients grad;
  const std::size_t n = data.size();
  const std::size_t batch = cfg.batch_size == 0 ? n : std::min(cfg.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  Mat xb;
  std::vector<int> yb;
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    if (batch < n) shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t len = std::min(batch, n - start);
      xb.resize(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(data.dim));
      yb.resize(len);
      for (std::size_t r = 0; r < len; ++r) {
        const auto src = data.row(order[start + r]);
        for (std::size_t f = 0; f < data.dim; ++f) xb(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) = src[f];
        yb[r] = data.labels[order[start + r]];
      }
      const double l = batch_loss_and_gradient(model, xb, yb, cfg.l2_alpha, grad);
      if (!std::isfinite(l)) throw NumericsError("training loss became non-finite at epoch " + std::to_string(epoch));
      epoch_loss += l * static_cast<double>(len);
      adam_step(model, grad, adam, cfg);
    }
    epoch_loss /= static_cast<double>(n);
    model.loss_curve.push_back(epoch_loss);
    if (epoch_loss < best - cfg.min_delta) {
      best = epoch_loss;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  return model;
}

KFoldReport stratified_kfold_f1(const Dataset& data, const TrainConfig& cfg, std::size_t folds,
                                std::vector<std::size_t> input_attributes) {
  const auto split = stratified_folds(data.labels, folds, cfg.seed);
  KFoldReport report;
  for (std::size_t f = 0; f < split.size(); ++f) {
    std::vector<std::size_t> train_rows;
    for (std::size_t g = 0; g < split.size(); ++g) {
      if (g != f) train_rows.insert(train_rows.end(), split[g].begin(), split[g].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    const Dataset balanced = smote_oversample(data.subset(train_rows), cfg.smote_neighbors, cfg.seed + f);
    const MlpModel model = train(balanced, cfg, input_attributes);

    std::vector<int> truth;
    std::vector<int> predicted;
    for (auto r : split[f]) {
      truth.push_back(data.labels[r]);
      predicted.push_back(predict_features(model, data.row(r)).predicted);
    }
    report.fold_f1.push_back(macro_f1(truth, predicted));
  }
  report.mean_f1 = std::accumulate(report.fold_f1.begin(), report.fold_f1.end(), 0.0) /
                   static_cast<double>(report.fold_f1.size());
  return report;
}

std::string model_to_json(const MlpModel& model) {
  using nlohmann::json;
  json doc;
  doc["version"] = kModelVersion;
  doc["layerDims"] = model.layer_dims;
  doc["inputAttributes"] = model.input_attributes;
  json weights = json::array();
  json biases = json::array();
  for (const auto& layer : model.layers) {
    json rows = json::array();
    for (std::size_t o = 0; o < layer.out; ++o) {
      rows.push_back(std::vector<double>(layer.weights.begin() + static_cast<std::ptrdiff_t>(o * layer.in),
                                         layer.weights.begin() + static_cast<std::ptrdiff_t>((o + 1) * layer.in)));
    }
    weights.push_back(std::move(rows));
    biases.push_back(layer.bias);
  }
  doc["weights"] = std::move(weights);
  doc["biases"] = std::move(biases);
  const auto& c = model.config;
  doc["trainConfig"] = {{"learningRate", c.learning_rate}, {"l2Alpha", c.l2_alpha},
                        {"beta1", c.beta1},                {"beta2", c.beta2},
                        {"adamEps", c.adam_eps},           {"batchSize", c.batch_size},
                        {"maxEpochs", c.max_epochs},       {"patience", c.patience},
                        {"minDelta", c.min_delta},         {"smoteNeighbors", c.smote_neighbors},
                        {"seed", c.seed},                  {"hidden", c.hidden}};
  doc["trainedOn"] = model.trained_on;
  doc["lossCurve"] = model.loss_curve;
  return doc.dump(1);
}

MlpModel model_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model json: ") + e.what());
  }
  try {
    if (!doc.contains("version")) throw FormatError("model json lacks the mandatory version field");
    if (doc.at("version").get<int>() != kModelVersion) {
      throw FormatError("unsupported model version " + doc.at("version").dump());
    }
    const auto dims = doc.at("layerDims").get<std::vector<std::size_t>>();
    MlpModel m = empty_model(dims);
    m.input_attributes = doc.at("inputAttributes").get<std::vector<std::size_t>>();
    if (m.input_attributes.size() != m.input_dim()) throw FormatError("inputAttributes does not match layerDims");
    const auto& weights = doc.at("weights");
    const auto& biases = doc.at("biases");
    if (weights.size() != m.layers.size() || biases.size() != m.layers.size()) {
      throw FormatError("weights/biases do not match layerDims");
    }
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
      auto& layer = m.layers[l];
      const auto rows = weights[l].get<std::vector<std::vector<double>>>();
      if (rows.size() != layer.out) throw FormatError("layer " + std::to_string(l) + " weight rows mismatch");
      for (std::size_t o = 0; o < layer.out; ++o) {
        if (rows[o].size() != layer.in) throw FormatError("layer " + std::to_string(l) + " weight columns mismatch");
        std::copy(rows[o].begin(), rows[o].end(), layer.weights.begin() + static_cast<std::ptrdiff_t>(o * layer.in));
      }
      layer.bias = biases[l].get<std::vector<double>>();
      if (layer.bias.size() != layer.out) throw FormatError("layer " + std::to_string(l) + " bias size mismatch");
    }
    if (doc.contains("trainConfig")) {
      const auto& c = doc["trainConfig"];
      auto& cfg = m.config;
      cfg.learning_rate = c.value("learningRate", cfg.learning_rate);
      cfg.l2_alpha = c.value("l2Alpha", cfg.l2_alpha);
      cfg.beta1 = c.value("beta1", cfg.beta1);
      cfg.beta2 = c.value("beta2", cfg.beta2);
      cfg.adam_eps = c.value("adamEps", cfg.adam_eps);
      cfg.batch_size = c.value("batchSize", cfg.batch_size);
      cfg.max_epochs = c.value("maxEpochs", cfg.max_epochs);
      cfg.patience = c.value("patience", cfg.patience);
      cfg.min_delta = c.value("minDelta", cfg.min_delta);
      cfg.smote_neighbors = c.value("smoteNeighbors", cfg.smote_neighbors);
      cfg.seed = c.value("seed", cfg.seed);
      cfg.hidden = c.value("hidden", cfg.hidden);
    }
    m.trained_on = doc.value("trainedOn", std::string{});
    m.loss_curve = doc.value("lossCurve", std::vector<double>{});
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model json: ") + e.what());
  }
}

void save_model(const MlpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << model_to_json(model) << '\n';
}

MlpModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

void write_predictions_csv(std::span<const PredictionScores> preds, std::ostream& out) {
  out << "query,p0,p1,p2,p3,predicted,removal_score\n";
  for (const auto& p : preds) {
    out << p.query;
    for (double v : p.probs) out << ',' << format_double(v);
    out << ',' << p.predicted << ',' << format_double(p.removal_score) << '\n';
  }
}

std::vector<PredictionScores> read_predictions_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("query,p0,p1,p2,p3,predicted,removal_score", 0) != 0) {
    throw FormatError("predictions csv must start with header 'query,p0,p1,p2,p3,predicted,removal_score'");
  }
  std::vector<PredictionScores> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::stringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 7) throw FormatError("predictions line " + std::to_string(lineno) + ": expected 7 fields");
    try {
      PredictionScores p;
      p.query = std::stoull(fields[0]);
      for (std::size_t c = 0; c < 4; ++c) p.probs[c] = std::stod(fields[1 + c]);
      p.predicted = std::stoi(fields[5]);
      p.removal_score = std::stod(fields[6]);
      out.push_back(p);
    } catch (const std::exception&) {
      throw FormatError("predictions line " + std::to_string(lineno) + ": unparsable field");
    }
  }
  return out;
}

}  // namespace smr
