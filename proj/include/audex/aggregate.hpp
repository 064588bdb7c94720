#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "audex/attribution.hpp"
#include "audex/matrix.hpp"

namespace audex {

// ---------------------------------------------------------------------------
// Display aggregations of an N x 19 x 26 attribution tensor down to N x 26,
// plus descriptive statistics for comparing attribution patterns between
// clips (e.g. benign vs. noisy).
// ---------------------------------------------------------------------------

enum class AggregationMode { RelativeFrame, SummedPerFrame, SummedPerWindow };

const char* aggregation_mode_name(AggregationMode mode);

struct AggregatedAttribution {
  Mat values;  // N x 26
  AggregationMode mode = AggregationMode::SummedPerWindow;
  std::size_t relative_position = 0;  // set when mode == RelativeFrame
};

// out(i,k) = A^i_{j,k}: one fixed relative position j in [0,19), center 9.
AggregatedAttribution slice_relative_frame(const AttributionTensor& tensor,
                                           std::size_t j);

// out(i,k) = total influence of frame i across every window containing it:
// sum over w in [max(0,i-9), min(N-1,i+9)] of A^w_{i-w+9, k}.
AggregatedAttribution sum_per_frame(const AttributionTensor& tensor);

// out(i,k) = sum_j A^i_{j,k}: total influence of all 19 context frames on
// window i's classification.
AggregatedAttribution sum_per_window(const AttributionTensor& tensor);

struct AttributionStats {
  std::size_t head_frames = 10;  // the k in head_energy_fraction
  std::vector<double> per_bin_mean_magnitude;       // 26 entries
  std::vector<double> per_position_mean_magnitude;  // 19 entries (tensor only)
  double head_energy_fraction = 0.0;  // in [0,1]; 0/0 defined as 0
};

// Stats over the full tensor: per-bin means over (i,j), per-position means
// over (i,k'), head fraction = |mass| in the first k windows / total |mass|.
AttributionStats attribution_stats(const AttributionTensor& tensor,
                                   std::size_t head_frames);

// Stats over an aggregated N x 26 matrix; there is no relative-position axis,
// so per_position_mean_magnitude stays empty.
AttributionStats attribution_stats(const Mat& matrix, std::size_t head_frames);

struct StatsDelta {
  std::size_t head_frames = 0;
  std::vector<double> per_bin_delta;
  std::vector<double> per_position_delta;
  double head_energy_fraction_delta = 0.0;
};

// Elementwise a - b on every stats field; the two sides must share shapes
// and the head-frame convention.
StatsDelta compare_stats(const AttributionStats& a, const AttributionStats& b);

}  // namespace audex
