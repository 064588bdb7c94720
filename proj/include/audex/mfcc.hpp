#pragma once

#include "audex/audio.hpp"
#include "audex/matrix.hpp"

namespace audex {

// Front-end constants: 32 ms frames at 20 ms stride for 16 kHz input.
inline constexpr std::size_t kFrameLength = 512;
inline constexpr std::size_t kFrameStride = 320;
inline constexpr std::size_t kNumMelFilters = 40;
inline constexpr std::size_t kNumCoefficients = 26;
inline constexpr double kPreEmphasis = 0.97;
inline constexpr double kLogFloor = 1e-20;

/// N x 26 cepstral coefficient matrix, one row per time frame.
struct MfccMatrix {
  Mat values;  // N x 26
  static constexpr int frame_length_ms = 32;
  static constexpr int frame_stride_ms = 20;

  std::size_t num_frames() const { return values.rows; }
};

/// Computes MFCCs with the pipeline:
///   pre-emphasis 0.97 -> 512-sample frames at 320-sample stride
///   -> periodic Hann window w[n] = 0.5*(1 - cos(2*pi*n/512))
///   -> power spectrum |X[k]|^2, k = 0..256
///   -> 40 triangular mel filters spanning 0..8000 Hz
///      (mel(f) = 2595*log10(1 + f/700), responses evaluated at bin centers)
///   -> ln(energy + 1e-20)
///   -> orthonormal DCT-II, coefficients 0..25 kept.
///
/// N = 1 + floor((S - 512) / 320) frames for S input samples.
/// Throws Error(TooShort) when the clip has fewer than 512 samples.
MfccMatrix compute_mfcc(const AudioClip& clip);

}  // namespace audex
