#include "audex/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "audex/error.hpp"
#include "audex/rng.hpp"

namespace audex {

namespace {

constexpr std::size_t kBatchSize = 32;

void affine(const Layer& layer, const std::vector<double>& in,
            std::vector<double>& out) {
  const std::size_t rows = layer.weights.rows;
  const std::size_t cols = layer.weights.cols;
  out.resize(rows);
  const double* w = layer.weights.data.data();
  for (std::size_t v = 0; v < rows; ++v) {
    double acc = layer.bias[v];
    const double* wrow = w + v * cols;
    for (std::size_t u = 0; u < cols; ++u) acc += wrow[u] * in[u];
    out[v] = acc;
  }
}

std::vector<double> softmax(const std::vector<double>& logits) {
  double max_logit = logits[0];
  for (double z : logits) max_logit = std::max(max_logit, z);
  std::vector<double> p(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - max_logit);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

double cross_entropy(const std::vector<double>& logits, int label) {
  double max_logit = logits[0];
  for (double z : logits) max_logit = std::max(max_logit, z);
  double sum_exp = 0.0;
  for (double z : logits) sum_exp += std::exp(z - max_logit);
  // -log softmax(label) via logsumexp
  return max_logit + std::log(sum_exp) - logits[static_cast<std::size_t>(label)];
}

std::vector<double> flatten_checked(const ModelParams& model,
                                    const FrameWindow& window) {
  require_shape(window.values, kWindowRows, kNumCoefficients, "window");
  if (model.input_dim() != kWindowFeatures) {
    throw Error(ErrorCode::DimensionMismatch,
                "model input dim " + std::to_string(model.input_dim()) +
                    " does not match window feature count " +
                    std::to_string(kWindowFeatures));
  }
  return window.flatten();
}

}  // namespace

void ModelParams::validate() const {
  if (layers.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "model has no layers");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    if (layer.weights.rows == 0 || layer.weights.cols == 0 ||
        layer.weights.data.size() != layer.weights.rows * layer.weights.cols) {
      throw Error(ErrorCode::DimensionMismatch,
                  "layer " + std::to_string(l) + " has malformed weights");
    }
    if (layer.bias.size() != layer.weights.rows) {
      throw Error(ErrorCode::DimensionMismatch,
                  "layer " + std::to_string(l) + " bias length " +
                      std::to_string(layer.bias.size()) + " != rows " +
                      std::to_string(layer.weights.rows));
    }
    if (l + 1 < layers.size() &&
        layers[l + 1].weights.cols != layer.weights.rows) {
      throw Error(ErrorCode::DimensionMismatch,
                  "layer " + std::to_string(l + 1) + " expects " +
                      std::to_string(layers[l + 1].weights.cols) +
                      " inputs, previous layer emits " +
                      std::to_string(layer.weights.rows));
    }
    if (!layer.weights.all_finite()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "layer " + std::to_string(l) + " has non-finite weights");
    }
    for (double b : layer.bias) {
      if (!std::isfinite(b)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "layer " + std::to_string(l) + " has non-finite bias");
      }
    }
  }
  if (input_dim() != kWindowFeatures) {
    throw Error(ErrorCode::DimensionMismatch,
                "model input dim must be " + std::to_string(kWindowFeatures) +
                    ", got " + std::to_string(input_dim()));
  }
  if (output_dim() != CharSet::kSize) {
    throw Error(ErrorCode::DimensionMismatch,
                "model output dim must be " + std::to_string(CharSet::kSize) +
                    ", got " + std::to_string(output_dim()));
  }
}

ForwardTrace forward_trace(const ModelParams& model, const FrameWindow& window) {
  ForwardTrace trace;
  trace.activations.push_back(flatten_checked(model, window));

  const std::size_t num_layers = model.layers.size();
  for (std::size_t l = 0; l < num_layers; ++l) {
    std::vector<double> pre;
    affine(model.layers[l], trace.activations.back(), pre);
    std::vector<double> act = pre;
    if (l + 1 < num_layers) {
      for (double& v : act) v = std::max(0.0, v);
    }
    trace.pre_activations.push_back(std::move(pre));
    trace.activations.push_back(std::move(act));
  }

  trace.logits = trace.pre_activations.back();
  trace.probabilities = softmax(trace.logits);
  return trace;
}

std::vector<double> forward_logits(const ModelParams& model,
                                   const std::vector<double>& input) {
  if (input.size() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "input length " + std::to_string(input.size()) +
                    " != model input dim " + std::to_string(model.input_dim()));
  }
  std::vector<double> cur = input;
  std::vector<double> next;
  const std::size_t num_layers = model.layers.size();
  for (std::size_t l = 0; l < num_layers; ++l) {
    affine(model.layers[l], cur, next);
    if (l + 1 < num_layers) {
      for (double& v : next) v = std::max(0.0, v);
    }
    std::swap(cur, next);
  }
  return cur;
}

Mat input_gradient(const ModelParams& model, const FrameWindow& window,
                   std::size_t target) {
  if (target >= CharSet::kSize) {
    throw Error(ErrorCode::IndexOutOfRange,
                "target index " + std::to_string(target) + " out of [0,28)");
  }
  const ForwardTrace trace = forward_trace(model, window);
  const std::size_t num_layers = model.layers.size();

  // seed with d(logit_target)/d(logit) = one-hot
  std::vector<double> delta(model.output_dim(), 0.0);
  delta[target] = 1.0;

  for (std::size_t l = num_layers; l-- > 0;) {
    const Layer& layer = model.layers[l];
    const std::size_t rows = layer.weights.rows;
    const std::size_t cols = layer.weights.cols;
    if (l + 1 < num_layers) {
      // pass through ReLU: derivative 0 at pre <= 0 (subgradient at 0 is 0)
      const std::vector<double>& pre = trace.pre_activations[l];
      for (std::size_t v = 0; v < rows; ++v) {
        if (pre[v] <= 0.0) delta[v] = 0.0;
      }
    }
    std::vector<double> prev(cols, 0.0);
    const double* w = layer.weights.data.data();
    for (std::size_t v = 0; v < rows; ++v) {
      const double d = delta[v];
      if (d == 0.0) continue;
      const double* wrow = w + v * cols;
      for (std::size_t u = 0; u < cols; ++u) prev[u] += wrow[u] * d;
    }
    delta = std::move(prev);
  }

  Mat grad(kWindowRows, kNumCoefficients);
  grad.data = std::move(delta);
  return grad;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

void save_model(const ModelParams& model, const std::string& path) {
  model.validate();
  nlohmann::json doc;
  doc["version"] = 1;
  doc["charset"] = CharSet::as_string();
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& layer : model.layers) {
    nlohmann::json jl;
    jl["rows"] = layer.weights.rows;
    jl["cols"] = layer.weights.cols;
    jl["weights"] = layer.weights.data;
    jl["bias"] = layer.bias;
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

ModelParams load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid model JSON: ") + e.what());
  }

  ModelParams model;
  try {
    if (doc.at("version").get<int>() != 1) {
      throw Error(ErrorCode::ParseError, "unsupported model version");
    }
    if (doc.at("charset").get<std::string>() != CharSet::as_string()) {
      throw Error(ErrorCode::ParseError, "unexpected charset in model file");
    }
    for (const auto& jl : doc.at("layers")) {
      Layer layer;
      layer.weights.rows = jl.at("rows").get<std::size_t>();
      layer.weights.cols = jl.at("cols").get<std::size_t>();
      layer.weights.data = jl.at("weights").get<std::vector<double>>();
      layer.bias = jl.at("bias").get<std::vector<double>>();
      model.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed model file: ") + e.what());
  }

  model.validate();  // throws DimensionMismatch on inconsistent dims
  return model;
}

// ---------------------------------------------------------------------------
// training
// ---------------------------------------------------------------------------

TrainResult train_epoch(const ModelParams& model,
                        const std::vector<FrameWindow>& windows,
                        const std::vector<int>& labels, double learning_rate,
                        std::uint64_t seed) {
  if (windows.size() != labels.size() || windows.empty()) {
    throw Error(ErrorCode::LengthMismatch,
                "windows (" + std::to_string(windows.size()) + ") and labels (" +
                    std::to_string(labels.size()) + ") must have equal length >= 1");
  }
  for (int label : labels) {
    if (label < 0 || label >= static_cast<int>(CharSet::kSize)) {
      throw Error(ErrorCode::InvalidLabel,
                  "label " + std::to_string(label) + " out of [0,28)");
    }
  }
  if (learning_rate < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be >= 0");
  }
  model.validate();

  TrainResult result;
  result.model = model;

  Rng rng(seed);
  std::vector<std::size_t> order = rng.permutation(windows.size());

  const std::size_t num_layers = result.model.layers.size();
  double loss_sum = 0.0;

  for (std::size_t batch_start = 0; batch_start < order.size();
       batch_start += kBatchSize) {
    const std::size_t batch_end = std::min(batch_start + kBatchSize, order.size());
    const std::size_t batch_count = batch_end - batch_start;

    std::vector<Mat> weight_grads(num_layers);
    std::vector<std::vector<double>> bias_grads(num_layers);
    for (std::size_t l = 0; l < num_layers; ++l) {
      const Layer& layer = result.model.layers[l];
      weight_grads[l] = Mat(layer.weights.rows, layer.weights.cols);
      bias_grads[l].assign(layer.bias.size(), 0.0);
    }

    for (std::size_t b = batch_start; b < batch_end; ++b) {
      const FrameWindow& window = windows[order[b]];
      const int label = labels[order[b]];
      const ForwardTrace trace = forward_trace(result.model, window);
      loss_sum += cross_entropy(trace.logits, label);

      // d(loss)/d(logits) = softmax - one-hot
      std::vector<double> delta = trace.probabilities;
      delta[static_cast<std::size_t>(label)] -= 1.0;

      for (std::size_t l = num_layers; l-- > 0;) {
        const Layer& layer = result.model.layers[l];
        const std::vector<double>& in = trace.activations[l];
        Mat& wg = weight_grads[l];
        std::vector<double>& bg = bias_grads[l];
        for (std::size_t v = 0; v < layer.weights.rows; ++v) {
          const double d = delta[v];
          if (d == 0.0) continue;
          bg[v] += d;
          double* wgrow = wg.data.data() + v * layer.weights.cols;
          for (std::size_t u = 0; u < layer.weights.cols; ++u) {
            wgrow[u] += d * in[u];
          }
        }
        if (l == 0) break;
        std::vector<double> prev(layer.weights.cols, 0.0);
        const double* w = layer.weights.data.data();
        for (std::size_t v = 0; v < layer.weights.rows; ++v) {
          const double d = delta[v];
          if (d == 0.0) continue;
          const double* wrow = w + v * layer.weights.cols;
          for (std::size_t u = 0; u < layer.weights.cols; ++u) {
            prev[u] += wrow[u] * d;
          }
        }
        const std::vector<double>& pre = trace.pre_activations[l - 1];
        for (std::size_t u = 0; u < prev.size(); ++u) {
          if (pre[u] <= 0.0) prev[u] = 0.0;
        }
        delta = std::move(prev);
      }
    }

    const double step = learning_rate / static_cast<double>(batch_count);
    for (std::size_t l = 0; l < num_layers; ++l) {
      Layer& layer = result.model.layers[l];
      for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
        layer.weights.data[i] -= step * weight_grads[l].data[i];
      }
      for (std::size_t v = 0; v < layer.bias.size(); ++v) {
        layer.bias[v] -= step * bias_grads[l][v];
      }
    }
  }

  result.mean_loss = loss_sum / static_cast<double>(windows.size());
  return result;
}

ModelParams init_model(const std::vector<std::size_t>& hidden_sizes,
                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> dims;
  dims.push_back(kWindowFeatures);
  for (std::size_t h : hidden_sizes) dims.push_back(h);
  dims.push_back(CharSet::kSize);

  ModelParams model;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    layer.weights = Mat(dims[l + 1], dims[l]);
    layer.bias.assign(dims[l + 1], 0.0);
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[l]));
    for (double& w : layer.weights.data) w = rng.uniform(-limit, limit);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

}  // namespace audex
