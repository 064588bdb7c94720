#include "audex/audio.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "audex/error.hpp"

namespace audex {

namespace {

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw Error(ErrorCode::UnsupportedFormat, "truncated WAV header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  if (!in) throw Error(ErrorCode::UnsupportedFormat, "truncated WAV header");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t fourcc(const char* tag) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(tag[0])) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(tag[1])) << 8) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(tag[2])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(tag[3])) << 24);
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

  if (read_u32(in) != fourcc("RIFF")) {
    throw Error(ErrorCode::UnsupportedFormat, "not a RIFF file: " + path);
  }
  read_u32(in);  // RIFF chunk size, unused
  if (read_u32(in) != fourcc("WAVE")) {
    throw Error(ErrorCode::UnsupportedFormat, "not a WAVE file: " + path);
  }

  bool have_fmt = false;
  std::uint16_t audio_format = 0, channels = 0, bits_per_sample = 0;
  std::uint32_t sample_rate = 0;
  std::vector<char> data;
  bool have_data = false;

  // chunk walk; unknown chunks (LIST, fact, ...) are skipped
  while (in.peek() != EOF) {
    const std::uint32_t id = read_u32(in);
    const std::uint32_t size = read_u32(in);
    if (id == fourcc("fmt ")) {
      if (size < 16) throw Error(ErrorCode::UnsupportedFormat, "fmt chunk too small");
      audio_format = read_u16(in);
      channels = read_u16(in);
      sample_rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits_per_sample = read_u16(in);
      in.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (id == fourcc("data")) {
      data.resize(size);
      in.read(data.data(), size);
      if (!in && size > 0) {
        throw Error(ErrorCode::UnsupportedFormat, "truncated data chunk");
      }
      have_data = true;
    } else {
      in.seekg(size, std::ios::cur);
    }
    if (size % 2 == 1) in.seekg(1, std::ios::cur);  // chunks are word-aligned
    if (!in) break;
  }

  if (!have_fmt || !have_data) {
    throw Error(ErrorCode::UnsupportedFormat, "missing fmt or data chunk");
  }
  if (audio_format != 1 || channels != 1 || bits_per_sample != 16) {
    throw Error(ErrorCode::UnsupportedFormat,
                "need PCM mono 16-bit, got format=" + std::to_string(audio_format) +
                    " channels=" + std::to_string(channels) +
                    " bits=" + std::to_string(bits_per_sample));
  }
  if (sample_rate != 16000) {
    throw Error(ErrorCode::UnsupportedSampleRate,
                "need 16000 Hz, got " + std::to_string(sample_rate));
  }
  if (data.size() < 2) throw Error(ErrorCode::EmptyAudio, "zero samples in " + path);

  AudioClip clip;
  clip.sample_rate = 16000;
  const std::size_t n = data.size() / 2;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = static_cast<unsigned char>(data[2 * i]);
    const auto hi = static_cast<unsigned char>(data[2 * i + 1]);
    const auto s = static_cast<std::int16_t>(lo | (hi << 8));
    // divide by 32768 so INT16_MIN lands exactly on -1
    clip.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return clip;
}

}  // namespace audex
