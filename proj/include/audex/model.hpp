#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "audex/charset.hpp"
#include "audex/matrix.hpp"
#include "audex/window.hpp"

namespace audex {

/// One affine layer: out = weights * in + bias. weights is out_dim x in_dim.
struct Layer {
  Mat weights;
  std::vector<double> bias;
};

/// Feed-forward character classifier over flattened 19x26 windows.
/// ReLU on hidden layers, identity on the output layer (28 logits).
struct ModelParams {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().weights.cols; }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().weights.rows; }
  std::size_t num_layers() const { return layers.size(); }

  /// Checks dimension chaining, finiteness, 494 inputs, 28 outputs.
  /// Throws Error(DimensionMismatch) on violation.
  void validate() const;
};

/// Everything the forward pass touches, retained for relevance propagation.
/// activations[0] is the flattened input; activations[l+1] is layer l's
/// post-nonlinearity output. pre_activations[l] is layer l's affine output.
struct ForwardTrace {
  std::vector<std::vector<double>> pre_activations;  // one per layer
  std::vector<std::vector<double>> activations;      // num_layers + 1 entries
  std::vector<double> logits;                        // == pre_activations.back()
  std::vector<double> probabilities;                 // softmax(logits)
};

ForwardTrace forward_trace(const ModelParams& model, const FrameWindow& window);

/// Logits for an already-flattened input vector (row-major j*26+k layout).
std::vector<double> forward_logits(const ModelParams& model,
                                   const std::vector<double>& input);

/// d(logit_c) / d(input), reshaped to 19x26. Reverse-mode through the ReLU
/// stack; the ReLU subgradient at exactly 0 is taken as 0.
Mat input_gradient(const ModelParams& model, const FrameWindow& window,
                   std::size_t target);

/// JSON model file: {version, charset, layers: [{rows, cols, weights, bias}]}.
/// Round-trips bit-exactly (decimal serialization with shortest
/// round-trip representation, at most 17 significant digits).
void save_model(const ModelParams& model, const std::string& path);
ModelParams load_model(const std::string& path);

struct TrainResult {
  ModelParams model;
  double mean_loss = 0.0;  // softmax cross-entropy, evaluated pre-update per batch
};

/// One epoch of minibatch SGD (batch 32, order shuffled by seed) on softmax
/// cross-entropy. Returns the updated parameters and the mean loss over all
/// examples, each batch's loss measured before that batch's update.
TrainResult train_epoch(const ModelParams& model,
                        const std::vector<FrameWindow>& windows,
                        const std::vector<int>& labels, double learning_rate,
                        std::uint64_t seed);

/// He-uniform initialized model with the given hidden sizes, 494 -> ... -> 28.
ModelParams init_model(const std::vector<std::size_t>& hidden_sizes,
                       std::uint64_t seed);

}  // namespace audex
