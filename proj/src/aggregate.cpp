#include "audex/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "audex/error.hpp"
#include "audex/window.hpp"

namespace audex {

namespace {

void check_tensor(const AttributionTensor& tensor) {
  for (const Mat& m : tensor.values) {
    require_shape(m, kWindowRows, kNumCoefficients, "attribution matrix");
  }
}

}  // namespace

const char* aggregation_mode_name(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::RelativeFrame: return "relative_frame";
    case AggregationMode::SummedPerFrame: return "summed_per_frame";
    case AggregationMode::SummedPerWindow: return "summed_per_window";
  }
  return "unknown";
}

AggregatedAttribution slice_relative_frame(const AttributionTensor& tensor,
                                           std::size_t j) {
  if (j >= kWindowRows) {
    throw Error(ErrorCode::IndexOutOfRange,
                "relative position " + std::to_string(j) + " out of [0,19)");
  }
  check_tensor(tensor);

  const std::size_t n = tensor.num_windows();
  AggregatedAttribution out;
  out.mode = AggregationMode::RelativeFrame;
  out.relative_position = j;
  out.values = Mat(n, kNumCoefficients);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kNumCoefficients; ++k) {
      out.values(i, k) = tensor.values[i](j, k);
    }
  }
  return out;
}

AggregatedAttribution sum_per_frame(const AttributionTensor& tensor) {
  check_tensor(tensor);

  const std::size_t n = tensor.num_windows();
  AggregatedAttribution out;
  out.mode = AggregationMode::SummedPerFrame;
  out.values = Mat(n, kNumCoefficients);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t w_begin = i >= kContextFrames ? i - kContextFrames : 0;
    const std::size_t w_end = std::min(n - 1, i + kContextFrames);
    for (std::size_t w = w_begin; w <= w_end; ++w) {
      const std::size_t pos = i - w + kContextFrames;
      for (std::size_t k = 0; k < kNumCoefficients; ++k) {
        out.values(i, k) += tensor.values[w](pos, k);
      }
    }
  }
  return out;
}

AggregatedAttribution sum_per_window(const AttributionTensor& tensor) {
  check_tensor(tensor);

  const std::size_t n = tensor.num_windows();
  AggregatedAttribution out;
  out.mode = AggregationMode::SummedPerWindow;
  out.values = Mat(n, kNumCoefficients);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kWindowRows; ++j) {
      for (std::size_t k = 0; k < kNumCoefficients; ++k) {
        out.values(i, k) += tensor.values[i](j, k);
      }
    }
  }
  return out;
}

AttributionStats attribution_stats(const AttributionTensor& tensor,
                                   std::size_t head_frames) {
  check_tensor(tensor);
  const std::size_t n = tensor.num_windows();
  if (head_frames > n) {
    throw Error(ErrorCode::IndexOutOfRange,
                "head frame count " + std::to_string(head_frames) +
                    " exceeds window count " + std::to_string(n));
  }

  AttributionStats stats;
  stats.head_frames = head_frames;
  stats.per_bin_mean_magnitude.assign(kNumCoefficients, 0.0);
  stats.per_position_mean_magnitude.assign(kWindowRows, 0.0);

  double total = 0.0;
  double head = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double window_mass = 0.0;
    for (std::size_t j = 0; j < kWindowRows; ++j) {
      for (std::size_t k = 0; k < kNumCoefficients; ++k) {
        const double mag = std::abs(tensor.values[i](j, k));
        stats.per_bin_mean_magnitude[k] += mag;
        stats.per_position_mean_magnitude[j] += mag;
        window_mass += mag;
      }
    }
    total += window_mass;
    if (i < head_frames) head += window_mass;
  }

  if (n > 0) {
    const double bin_count = static_cast<double>(n * kWindowRows);
    const double pos_count = static_cast<double>(n * kNumCoefficients);
    for (double& v : stats.per_bin_mean_magnitude) v /= bin_count;
    for (double& v : stats.per_position_mean_magnitude) v /= pos_count;
  }
  stats.head_energy_fraction = total > 0.0 ? head / total : 0.0;
  return stats;
}

AttributionStats attribution_stats(const Mat& matrix, std::size_t head_frames) {
  if (matrix.cols != kNumCoefficients) {
    throw Error(ErrorCode::ShapeMismatch,
                "aggregated matrix must have 26 columns, got " +
                    std::to_string(matrix.cols));
  }
  if (head_frames > matrix.rows) {
    throw Error(ErrorCode::IndexOutOfRange,
                "head frame count " + std::to_string(head_frames) +
                    " exceeds row count " + std::to_string(matrix.rows));
  }

  AttributionStats stats;
  stats.head_frames = head_frames;
  stats.per_bin_mean_magnitude.assign(kNumCoefficients, 0.0);

  double total = 0.0;
  double head = 0.0;
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    double row_mass = 0.0;
    for (std::size_t k = 0; k < kNumCoefficients; ++k) {
      const double mag = std::abs(matrix(i, k));
      stats.per_bin_mean_magnitude[k] += mag;
      row_mass += mag;
    }
    total += row_mass;
    if (i < head_frames) head += row_mass;
  }

  if (matrix.rows > 0) {
    for (double& v : stats.per_bin_mean_magnitude) {
      v /= static_cast<double>(matrix.rows);
    }
  }
  stats.head_energy_fraction = total > 0.0 ? head / total : 0.0;
  return stats;
}

StatsDelta compare_stats(const AttributionStats& a, const AttributionStats& b) {
  if (a.per_bin_mean_magnitude.size() != b.per_bin_mean_magnitude.size() ||
      a.per_position_mean_magnitude.size() !=
          b.per_position_mean_magnitude.size()) {
    throw Error(ErrorCode::ShapeMismatch, "stats vectors differ in shape");
  }
  if (a.head_frames != b.head_frames) {
    throw Error(ErrorCode::ShapeMismatch,
                "head frame conventions differ: " +
                    std::to_string(a.head_frames) + " vs " +
                    std::to_string(b.head_frames));
  }

  StatsDelta delta;
  delta.head_frames = a.head_frames;
  delta.per_bin_delta.resize(a.per_bin_mean_magnitude.size());
  for (std::size_t i = 0; i < delta.per_bin_delta.size(); ++i) {
    delta.per_bin_delta[i] =
        a.per_bin_mean_magnitude[i] - b.per_bin_mean_magnitude[i];
  }
  delta.per_position_delta.resize(a.per_position_mean_magnitude.size());
  for (std::size_t i = 0; i < delta.per_position_delta.size(); ++i) {
    delta.per_position_delta[i] =
        a.per_position_mean_magnitude[i] - b.per_position_mean_magnitude[i];
  }
  delta.head_energy_fraction_delta =
      a.head_energy_fraction - b.head_energy_fraction;
  return delta;
}

}  // namespace audex
