#pragma once

#include <string>
#include <vector>

namespace audex {

/// Mono audio at 16 kHz, samples normalized into [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 16000;
};

/// Reads a RIFF/WAVE file. Accepts only PCM, mono, 16-bit, 16 kHz.
/// Samples are scaled by 1/32768 so the full int16 range maps into [-1, 1].
///
/// Throws Error with code:
///   IoError               file missing or unreadable
///   UnsupportedFormat     not RIFF/WAVE, or not PCM/mono/16-bit
///   UnsupportedSampleRate sample rate != 16000
///   EmptyAudio            zero-length data chunk
AudioClip read_wav(const std::string& path);

}  // namespace audex
