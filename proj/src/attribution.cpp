#include "audex/attribution.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "audex/error.hpp"
#include "audex/rng.hpp"

namespace audex {

namespace {

constexpr double kDenominatorGuard = 1e-12;

void check_target(std::size_t target) {
  if (target >= CharSet::kSize) {
    throw Error(ErrorCode::IndexOutOfRange,
                "target index " + std::to_string(target) + " out of [0,28)");
  }
}

Mat to_window_matrix(std::vector<double>&& flat) {
  Mat m(kWindowRows, kNumCoefficients);
  m.data = std::move(flat);
  return m;
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::Saliency: return "saliency";
    case Method::Lrp: return "lrp";
    case Method::Shap: return "shap";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "saliency") return Method::Saliency;
  if (name == "lrp") return Method::Lrp;
  if (name == "shap") return Method::Shap;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

Mat compute_saliency(const ModelParams& model, const FrameWindow& window,
                     std::size_t target) {
  check_target(target);
  return elementwise_abs(input_gradient(model, window, target));
}

Mat compute_lrp(const ModelParams& model, const FrameWindow& window,
                std::size_t target, const LrpConfig& config) {
  check_target(target);
  if (config.epsilon < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  }

  const ForwardTrace trace = forward_trace(model, window);
  const std::size_t num_layers = model.layers.size();
  const double scale = 1.0 + config.epsilon;

  // seed: target logit at the output layer, zero elsewhere
  std::vector<double> relevance(model.output_dim(), 0.0);
  relevance[target] = trace.logits[target];

  for (std::size_t l = num_layers; l-- > 0;) {
    const Layer& layer = model.layers[l];
    const std::size_t rows = layer.weights.rows;
    const std::size_t cols = layer.weights.cols;
    const std::vector<double>& x = trace.activations[l];
    const std::vector<double>& pre = trace.pre_activations[l];

    // R_u = x_u * sum_v w_vu * R_v / ((1+eps) * pre_v), guarded
    std::vector<double> accum(cols, 0.0);
    const double* w = layer.weights.data.data();
    for (std::size_t v = 0; v < rows; ++v) {
      if (relevance[v] == 0.0 || std::abs(pre[v]) < kDenominatorGuard) continue;
      const double coef = relevance[v] / (scale * pre[v]);
      const double* wrow = w + v * cols;
      for (std::size_t u = 0; u < cols; ++u) accum[u] += wrow[u] * coef;
    }
    std::vector<double> prev(cols);
    for (std::size_t u = 0; u < cols; ++u) prev[u] = x[u] * accum[u];
    relevance = std::move(prev);
  }

  return to_window_matrix(std::move(relevance));
}

BackgroundSample build_background(const std::vector<Mat>& windows) {
  if (windows.empty()) {
    throw Error(ErrorCode::EmptyInput, "background needs at least one window");
  }
  for (const Mat& w : windows) {
    require_shape(w, kWindowRows, kNumCoefficients, "background window");
  }

  BackgroundSample background;
  const std::size_t count = windows.size();
  std::vector<double> column(count);
  for (std::size_t idx = 0; idx < kWindowFeatures; ++idx) {
    for (std::size_t w = 0; w < count; ++w) column[w] = windows[w].data[idx];
    // lower median: element at rank (count-1)/2 of the sorted values
    auto mid = column.begin() + static_cast<std::ptrdiff_t>((count - 1) / 2);
    std::nth_element(column.begin(), mid, column.end());
    background.values.data[idx] = *mid;
  }
  return background;
}

// ---------------------------------------------------------------------------
// sampled SHAP
// ---------------------------------------------------------------------------

namespace {

// Evaluates logit_target with the first affine layer's output maintained
// incrementally: switching one feature updates the 128-vector by a scaled
// weight column, and only the upper layers are recomputed.
class IncrementalLogit {
 public:
  IncrementalLogit(const ModelParams& model, std::size_t target)
      : model_(model), target_(target) {
    pre1_.resize(model.layers[0].weights.rows);
    scratch_a_.resize(pre1_.size());
  }

  void reset(const std::vector<double>& base_pre1) { pre1_ = base_pre1; }

  void switch_feature(std::size_t p, double delta) {
    const Layer& first = model_.layers[0];
    const double* w = first.weights.data.data();
    const std::size_t cols = first.weights.cols;
    const std::size_t rows = first.weights.rows;
    for (std::size_t v = 0; v < rows; ++v) pre1_[v] += w[v * cols + p] * delta;
  }

  double logit() {
    const std::size_t num_layers = model_.layers.size();
    if (num_layers == 1) return pre1_[target_];

    scratch_a_.resize(pre1_.size());
    for (std::size_t v = 0; v < pre1_.size(); ++v) {
      scratch_a_[v] = std::max(0.0, pre1_[v]);
    }
    const std::vector<double>* cur = &scratch_a_;
    for (std::size_t l = 1; l < num_layers; ++l) {
      const Layer& layer = model_.layers[l];
      const std::size_t rows = layer.weights.rows;
      const std::size_t cols = layer.weights.cols;
      scratch_b_.resize(rows);
      const double* w = layer.weights.data.data();
      const bool hidden = l + 1 < num_layers;
      for (std::size_t v = 0; v < rows; ++v) {
        double acc = layer.bias[v];
        const double* wrow = w + v * cols;
        for (std::size_t u = 0; u < cols; ++u) acc += wrow[u] * (*cur)[u];
        scratch_b_[v] = hidden ? std::max(0.0, acc) : acc;
      }
      std::swap(scratch_a_, scratch_b_);
      cur = &scratch_a_;
    }
    return (*cur)[target_];
  }

 private:
  const ModelParams& model_;
  std::size_t target_;
  std::vector<double> pre1_;
  std::vector<double> scratch_a_;
  std::vector<double> scratch_b_;
};

}  // namespace

Mat compute_shap(const ModelParams& model, const FrameWindow& window,
                 std::size_t target, const ShapConfig& config,
                 Mat* standard_error) {
  check_target(target);
  require_shape(window.values, kWindowRows, kNumCoefficients, "window");
  require_shape(config.background.values, kWindowRows, kNumCoefficients,
                "background");
  if (config.num_permutations == 0) {
    throw Error(ErrorCode::InvalidArgument, "num_permutations must be >= 1");
  }
  if (model.input_dim() != kWindowFeatures) {
    throw Error(ErrorCode::DimensionMismatch,
                "model input dim does not match window feature count");
  }

  const std::vector<double> x = window.flatten();
  const std::vector<double>& bg = config.background.values.data;

  std::vector<double> diff(kWindowFeatures);
  for (std::size_t p = 0; p < kWindowFeatures; ++p) diff[p] = x[p] - bg[p];

  // first-layer pre-activation at the background, computed once
  const Layer& first = model.layers[0];
  std::vector<double> base_pre1(first.weights.rows);
  {
    const double* w = first.weights.data.data();
    const std::size_t cols = first.weights.cols;
    for (std::size_t v = 0; v < first.weights.rows; ++v) {
      double acc = first.bias[v];
      const double* wrow = w + v * cols;
      for (std::size_t u = 0; u < cols; ++u) acc += wrow[u] * bg[u];
      base_pre1[v] = acc;
    }
  }

  IncrementalLogit eval(model, target);
  eval.reset(base_pre1);
  const double background_logit = eval.logit();

  std::vector<double> sum(kWindowFeatures, 0.0);
  std::vector<double> sum_sq(kWindowFeatures, 0.0);

  Rng rng(config.seed);
  const std::size_t m = config.num_permutations;
  for (std::size_t t = 0; t < m; ++t) {
    const std::vector<std::size_t> order = rng.permutation(kWindowFeatures);
    eval.reset(base_pre1);
    double prev = background_logit;
    for (std::size_t p : order) {
      // a feature already at its background value contributes nothing and
      // needs no re-evaluation
      if (x[p] == bg[p]) continue;
      eval.switch_feature(p, diff[p]);
      const double cur = eval.logit();
      const double delta = cur - prev;
      prev = cur;
      sum[p] += delta;
      sum_sq[p] += delta * delta;
    }
  }

  const double inv_m = 1.0 / static_cast<double>(m);
  std::vector<double> phi(kWindowFeatures);
  for (std::size_t p = 0; p < kWindowFeatures; ++p) phi[p] = sum[p] * inv_m;

  if (standard_error != nullptr) {
    *standard_error = Mat(kWindowRows, kNumCoefficients);
    if (m >= 2) {
      for (std::size_t p = 0; p < kWindowFeatures; ++p) {
        const double mean = phi[p];
        double var = (sum_sq[p] - static_cast<double>(m) * mean * mean) /
                     static_cast<double>(m - 1);
        var = std::max(0.0, var);
        standard_error->data[p] = std::sqrt(var * inv_m);
      }
    }
  }

  return to_window_matrix(std::move(phi));
}

// ---------------------------------------------------------------------------
// exact Shapley oracle
// ---------------------------------------------------------------------------

namespace {

// insert a zero bit at position p: the low p bits stay, the rest shift up
std::uint32_t expand_avoiding(std::uint32_t packed, std::size_t p) {
  const std::uint32_t low = packed & ((1u << p) - 1u);
  const std::uint32_t high = (packed >> p) << (p + 1);
  return high | low;
}

}  // namespace

std::vector<double> exact_shapley(
    const std::function<double(std::uint32_t)>& value,
    std::size_t num_features) {
  if (num_features > 20) {
    throw Error(ErrorCode::TooManyFeatures,
                "exact Shapley limited to 20 features, got " +
                    std::to_string(num_features));
  }
  if (num_features == 0) return {};

  const std::uint32_t full = 1u << num_features;
  std::vector<double> cache(full);
  for (std::uint32_t mask = 0; mask < full; ++mask) cache[mask] = value(mask);

  // weight(s) = s!(F-1-s)!/F! = 1 / (F * C(F-1, s)), binomials exact
  std::vector<double> weight(num_features);
  std::uint64_t binom = 1;  // C(F-1, 0)
  for (std::size_t s = 0; s < num_features; ++s) {
    weight[s] = 1.0 / (static_cast<double>(num_features) *
                       static_cast<double>(binom));
    binom = binom * (num_features - 1 - s) / (s + 1);
  }

  std::vector<double> phi(num_features);
  const std::uint32_t subsets = full >> 1;  // 2^(F-1)
  for (std::size_t p = 0; p < num_features; ++p) {
    const std::uint32_t bit = 1u << p;
    double acc = 0.0;
    for (std::uint32_t packed = 0; packed < subsets; ++packed) {
      const std::uint32_t mask = expand_avoiding(packed, p);
      const int s = std::popcount(mask);
      acc += weight[static_cast<std::size_t>(s)] *
             (cache[mask | bit] - cache[mask]);
    }
    phi[p] = acc;
  }
  return phi;
}

// ---------------------------------------------------------------------------
// parallel driver
// ---------------------------------------------------------------------------

namespace {

// ATTRIB_THREADS caps parallelism when set to a positive integer
std::size_t env_thread_cap() {
  if (const char* env = std::getenv("ATTRIB_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1) {
      return static_cast<std::size_t>(parsed);
    }
  }
  return 0;  // no cap
}

}  // namespace

std::size_t default_thread_count() {
  std::size_t count = std::thread::hardware_concurrency();
  if (count == 0) count = 1;
  if (const std::size_t cap = env_thread_cap()) count = std::min(count, cap);
  return count;
}

AttributionTensor attribute_all(const ModelParams& model,
                                const std::vector<FrameWindow>& windows,
                                const std::vector<std::size_t>& targets,
                                Method method, const LrpConfig& lrp_config,
                                const ShapConfig& shap_config,
                                std::size_t num_threads) {
  if (windows.size() != targets.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "windows (" + std::to_string(windows.size()) +
                    ") and targets (" + std::to_string(targets.size()) +
                    ") must have equal length");
  }

  AttributionTensor tensor;
  tensor.method = method;
  tensor.targets = targets;
  tensor.values.resize(windows.size());
  if (windows.empty()) return tensor;

  const auto attribute_one = [&](std::size_t i) {
    switch (method) {
      case Method::Saliency:
        tensor.values[i] = compute_saliency(model, windows[i], targets[i]);
        break;
      case Method::Lrp:
        tensor.values[i] = compute_lrp(model, windows[i], targets[i],
                                       lrp_config);
        break;
      case Method::Shap: {
        ShapConfig per_window = shap_config;
        per_window.seed = shap_config.seed ^ static_cast<std::uint64_t>(i);
        tensor.values[i] = compute_shap(model, windows[i], targets[i],
                                        per_window);
        break;
      }
    }
  };

  std::size_t threads = num_threads == 0 ? default_thread_count() : num_threads;
  if (const std::size_t cap = env_thread_cap()) threads = std::min(threads, cap);
  threads = std::max<std::size_t>(1, std::min(threads, windows.size()));

  if (threads == 1) {
    for (std::size_t i = 0; i < windows.size(); ++i) attribute_one(i);
    return tensor;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= windows.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        attribute_one(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  return tensor;
}

}  // namespace audex
