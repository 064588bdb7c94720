#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "audex/matrix.hpp"
#include "audex/model.hpp"
#include "audex/window.hpp"

namespace audex {

// ---------------------------------------------------------------------------
// Input-feature attribution for the frame classifier.
//
// Three methods over a 19x26 context window:
//   saliency  |d logit_c / d x|, elementwise
//   lrp       epsilon-stabilized layer-wise relevance propagation
//   shap      permutation-sampling Shapley value estimate vs. a background
// plus a brute-force exact Shapley oracle for small feature counts.
// ---------------------------------------------------------------------------

enum class Method { Saliency, Lrp, Shap };

const char* method_name(Method method);
Method method_from_name(const std::string& name);  // InvalidArgument on unknown

struct LrpConfig {
  double epsilon = 1e-4;  // nonnegative stabilizer
};

// Replacement values representing "feature absent" in coalition evaluation.
struct BackgroundSample {
  Mat values;  // 19x26

  BackgroundSample() : values(kWindowRows, kNumCoefficients) {}
};

struct ShapConfig {
  std::size_t num_permutations = 2000;
  std::uint64_t seed = 0;
  BackgroundSample background;
};

// One attribution matrix per window, all produced by the same method.
struct AttributionTensor {
  std::vector<Mat> values;            // N matrices, each 19x26
  Method method = Method::Saliency;
  std::vector<std::size_t> targets;   // per-window explained character index

  std::size_t num_windows() const { return values.size(); }
};

// A = |d logit_target / d x|, elementwise.
Mat compute_saliency(const ModelParams& model, const FrameWindow& window,
                     std::size_t target);

// Relevance seeded with the target logit at the output layer, redistributed
// backward through each affine layer as
//   R_u = sum_v [ z_vu / ((1+eps) * pre_v) ] * R_v,   z_vu = w_vu * x_u,
// where pre_v is the traced pre-activation (weighted sum plus bias, added
// once) and terms with |pre_v| < 1e-12 contribute zero.
Mat compute_lrp(const ModelParams& model, const FrameWindow& window,
                std::size_t target, const LrpConfig& config);

// Elementwise lower median across the given windows.
BackgroundSample build_background(const std::vector<Mat>& windows);

// Permutation-sampling Shapley estimate of each feature's contribution to
// logit_target, relative to the background.  For each of M permutations the
// features are switched from background to window value in permutation order
// and the logit delta is credited to the switched feature; the estimate is
// the per-feature mean.  Deterministic in (model, window, target, config).
// If standard_error is non-null it receives the per-feature standard error
// of the mean (zeros when M < 2).
Mat compute_shap(const ModelParams& model, const FrameWindow& window,
                 std::size_t target, const ShapConfig& config,
                 Mat* standard_error = nullptr);

// Exact Shapley values by full coalition enumeration.  The game is given as
// a value function over bitmask coalitions (bit p set = feature p present).
// Restricted to num_features <= 20 (2^F evaluations).
std::vector<double> exact_shapley(
    const std::function<double(std::uint32_t)>& value,
    std::size_t num_features);

// Thread count used when the caller does not pin one: hardware concurrency,
// capped by the ATTRIB_THREADS environment variable when set.
std::size_t default_thread_count();

// Attribute every window with the chosen method.  Windows are independent
// and may be processed in parallel; results are stored by window index so
// the output never depends on scheduling.  SHAP randomness is derived per
// window as seed ^ window_index.  num_threads = 0 means default_thread_count;
// the ATTRIB_THREADS cap applies either way.
AttributionTensor attribute_all(const ModelParams& model,
                                const std::vector<FrameWindow>& windows,
                                const std::vector<std::size_t>& targets,
                                Method method, const LrpConfig& lrp_config,
                                const ShapConfig& shap_config,
                                std::size_t num_threads = 0);

}  // namespace audex
