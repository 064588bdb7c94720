#include <cstdint>
#include <vector>

#include <doctest.h>

#include "audex/audio.hpp"
#include "audex/error.hpp"

#include "testutil.hpp"

using testutil::ScratchDir;
using testutil::WavSpec;

TEST_CASE("read_wav recovers samples normalized by 32768") {
  ScratchDir dir;
  const std::vector<std::int16_t> samples = {0, 1, -1, 32767, -32768, 100, -200};
  const std::string path = dir.file("basic.wav");
  testutil::write_file(path, testutil::wav_bytes(samples));

  const audex::AudioClip clip = audex::read_wav(path);
  REQUIRE(clip.samples.size() == samples.size());
  CHECK(clip.sample_rate == 16000);
  CHECK(clip.samples[0] == 0.0);
  CHECK(clip.samples[1] == 1.0 / 32768.0);
  CHECK(clip.samples[2] == -1.0 / 32768.0);
  CHECK(clip.samples[3] == 32767.0 / 32768.0);
  CHECK(clip.samples[4] == -1.0);  // INT16_MIN lands exactly on -1
}

TEST_CASE("read_wav skips unknown chunks before and after data") {
  ScratchDir dir;
  const std::vector<std::int16_t> samples = {5, -5, 7};

  // splice a LIST chunk between "WAVE" and "fmt ", and a trailing one
  std::string bytes = testutil::wav_bytes(samples);
  std::string list = "LIST";
  testutil::append_u32(list, 6);
  list += "INFOxy";  // 6 payload bytes, even => no pad
  bytes.insert(12, list);
  bytes += list;
  // patch the RIFF size
  const std::uint32_t riff_size = static_cast<std::uint32_t>(bytes.size() - 8);
  bytes[4] = static_cast<char>(riff_size & 0xff);
  bytes[5] = static_cast<char>((riff_size >> 8) & 0xff);
  bytes[6] = static_cast<char>((riff_size >> 16) & 0xff);
  bytes[7] = static_cast<char>((riff_size >> 24) & 0xff);

  const std::string path = dir.file("chunky.wav");
  testutil::write_file(path, bytes);

  const audex::AudioClip clip = audex::read_wav(path);
  REQUIRE(clip.samples.size() == 3);
  CHECK(clip.samples[0] == 5.0 / 32768.0);
}

TEST_CASE("read_wav error cases") {
  ScratchDir dir;
  const std::vector<std::int16_t> samples(256, 1000);
  const auto write_variant = [&](const std::string& name, WavSpec spec) {
    const std::string path = dir.file(name);
    testutil::write_file(path, testutil::wav_bytes(samples, spec));
    return path;
  };

  SUBCASE("missing file") {
    CHECK_AUDEX_ERROR(audex::read_wav(dir.file("absent.wav")),
                      audex::ErrorCode::IoError);
  }
  SUBCASE("not RIFF") {
    const std::string path = dir.file("junk.wav");
    testutil::write_file(path, "this is not audio at all, sorry");
    CHECK_AUDEX_ERROR(audex::read_wav(path),
                      audex::ErrorCode::UnsupportedFormat);
  }
  SUBCASE("stereo rejected") {
    WavSpec spec;
    spec.channels = 2;
    CHECK_AUDEX_ERROR(audex::read_wav(write_variant("stereo.wav", spec)),
                      audex::ErrorCode::UnsupportedFormat);
  }
  SUBCASE("non-PCM rejected") {
    WavSpec spec;
    spec.format = 3;  // IEEE float
    CHECK_AUDEX_ERROR(audex::read_wav(write_variant("float.wav", spec)),
                      audex::ErrorCode::UnsupportedFormat);
  }
  SUBCASE("wrong sample rate rejected") {
    WavSpec spec;
    spec.sample_rate = 8000;
    CHECK_AUDEX_ERROR(audex::read_wav(write_variant("slow.wav", spec)),
                      audex::ErrorCode::UnsupportedSampleRate);
  }
  SUBCASE("empty data chunk rejected") {
    const std::string path = dir.file("empty.wav");
    testutil::write_file(path, testutil::wav_bytes({}));
    CHECK_AUDEX_ERROR(audex::read_wav(path), audex::ErrorCode::EmptyAudio);
  }
  SUBCASE("truncated data chunk rejected") {
    std::string bytes = testutil::wav_bytes(samples);
    bytes.resize(bytes.size() - 64);
    const std::string path = dir.file("cut.wav");
    testutil::write_file(path, bytes);
    CHECK_AUDEX_ERROR(audex::read_wav(path),
                      audex::ErrorCode::UnsupportedFormat);
  }
}
