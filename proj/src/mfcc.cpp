#include "audex/mfcc.hpp"

#include <cmath>

#include "audex/dsp.hpp"
#include "audex/error.hpp"

namespace audex {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kNumBins = kFrameLength / 2 + 1;  // 257

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

/// 40 x 257 triangular filterbank, filters equally spaced on the mel scale
/// between 0 Hz and 8 kHz, responses sampled at FFT bin center frequencies.
Mat build_mel_bank(double sample_rate) {
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> hz_points(kNumMelFilters + 2);
  for (std::size_t i = 0; i < hz_points.size(); ++i) {
    hz_points[i] = mel_to_hz(mel_max * static_cast<double>(i) /
                             static_cast<double>(kNumMelFilters + 1));
  }

  Mat bank(kNumMelFilters, kNumBins);
  for (std::size_t m = 0; m < kNumMelFilters; ++m) {
    const double left = hz_points[m];
    const double center = hz_points[m + 1];
    const double right = hz_points[m + 2];
    for (std::size_t k = 0; k < kNumBins; ++k) {
      const double f = static_cast<double>(k) * sample_rate /
                       static_cast<double>(kFrameLength);
      double resp = 0.0;
      if (f > left && f < right) {
        resp = (f <= center) ? (f - left) / (center - left)
                             : (right - f) / (right - center);
      }
      bank(m, k) = resp;
    }
  }
  return bank;
}

/// Orthonormal DCT-II table, 26 x 40.
Mat build_dct_table() {
  Mat table(kNumCoefficients, kNumMelFilters);
  const double n = static_cast<double>(kNumMelFilters);
  const double scale0 = std::sqrt(1.0 / n);
  const double scale = std::sqrt(2.0 / n);
  for (std::size_t k = 0; k < kNumCoefficients; ++k) {
    for (std::size_t i = 0; i < kNumMelFilters; ++i) {
      const double angle = kPi * static_cast<double>(k) *
                           (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
      table(k, i) = (k == 0 ? scale0 : scale) * std::cos(angle);
    }
  }
  return table;
}

}  // namespace

MfccMatrix compute_mfcc(const AudioClip& clip) {
  const std::size_t num_samples = clip.samples.size();
  if (num_samples < kFrameLength) {
    throw Error(ErrorCode::TooShort,
                "need at least " + std::to_string(kFrameLength) + " samples, got " +
                    std::to_string(num_samples));
  }

  const std::size_t num_frames = 1 + (num_samples - kFrameLength) / kFrameStride;

  // pre-emphasis: y[0] = x[0], y[t] = x[t] - 0.97 * x[t-1]
  std::vector<double> emphasized(num_samples);
  emphasized[0] = clip.samples[0];
  for (std::size_t t = 1; t < num_samples; ++t) {
    emphasized[t] = clip.samples[t] - kPreEmphasis * clip.samples[t - 1];
  }

  std::vector<double> hann(kFrameLength);
  for (std::size_t n = 0; n < kFrameLength; ++n) {
    hann[n] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(n) /
                                    static_cast<double>(kFrameLength)));
  }

  const Mat mel_bank = build_mel_bank(static_cast<double>(clip.sample_rate));
  const Mat dct = build_dct_table();

  MfccMatrix out;
  out.values = Mat(num_frames, kNumCoefficients);

  std::vector<double> frame(kFrameLength);
  std::vector<double> log_energies(kNumMelFilters);
  for (std::size_t i = 0; i < num_frames; ++i) {
    const std::size_t start = i * kFrameStride;
    for (std::size_t n = 0; n < kFrameLength; ++n) {
      frame[n] = emphasized[start + n] * hann[n];
    }
    const std::vector<double> power = dsp::power_spectrum(frame);

    for (std::size_t m = 0; m < kNumMelFilters; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < kNumBins; ++k) e += mel_bank(m, k) * power[k];
      log_energies[m] = std::log(e + kLogFloor);
    }

    for (std::size_t k = 0; k < kNumCoefficients; ++k) {
      double c = 0.0;
      for (std::size_t m = 0; m < kNumMelFilters; ++m) {
        c += dct(k, m) * log_energies[m];
      }
      out.values(i, k) = c;
    }
  }
  return out;
}

}  // namespace audex
