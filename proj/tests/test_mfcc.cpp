#include <cmath>
#include <string>

#include <doctest.h>

#include "audex/audio.hpp"
#include "audex/error.hpp"
#include "audex/mfcc.hpp"

#include "testutil.hpp"

namespace {

audex::AudioClip clip_of(std::size_t num_samples, double value = 0.0) {
  audex::AudioClip clip;
  clip.samples.assign(num_samples, value);
  return clip;
}

// frozen from tests/oracles/mfcc_reference.py (NumPy rfft + SciPy DCT-II on
// tests/data/golden_sine.wav)
constexpr double kGoldenSineMfcc[4][26] = {
    {-61.441550555238223, 26.775051391236701, -9.2673204479583724, -30.678516131742214, -15.796324873489059, 1.0214721031095357, 4.2132353613223277, 0.37805754974335271, -1.9313688712028967, -0.70058240470859001, 0.67786444175446747, 0.84310763128501964, -0.37110720974133204, -1.1256772684754586, -0.13938685270810161, -0.27220720801112752, -0.071643966774586468, 0.14105086748477025, -0.47888124574222402, -0.4192407415926856, 0.27946172371127431, -0.13668394811376977, -0.29790195932504626, 0.029692436921335497, 0.0029267569980544889, -0.10725776412847465},
    {-63.660232667091869, 9.3939948114942169, -32.731598182583909, -24.945941766880647, 11.705292576385183, 14.191369850138807, -2.2848049325303705, -5.5745215728556747, -0.45135914372176678, 1.5496733498269604, -0.36367156416800772, -0.65628955002153599, 1.1711886369071025, 0.27189815796096839, -0.75095466848934489, -0.46234369775736328, 0.091071827527273885, 0.64215755721629053, -0.15504794433355834, -0.67126190496174898, 0.47971033040578898, -0.082032970969147356, -0.35049669776866238, 0.28445301175178239, -0.237386188701943, 0.085815241881550514},
    {-66.718054705089614, -5.0705421003246061, -38.398314581455196, -0.64478832018626309, 24.171333544056765, -4.2168814336633025, -12.007046136720493, 3.239961612131562, 5.2018636403781873, -2.0588631294331412, -1.5717885189193024, 0.92366303857311605, -0.41108754124147062, 0.10780373472992517, 0.53897170375830117, 0.024919603219628154, -1.1352297441067818, 0.56961211454618765, 0.61764445848165261, -0.55517488264266446, -0.279911273097594, 0.31309336184298353, -0.058414663612616935, -0.066025158438627274, -0.036981873543879273, 0.017600159951418538},
    {-75.272650313809365, -21.80228135923408, -36.225955690978559, 18.624355053660061, 12.736680153890168, -19.373565550660636, 1.6239558390082829, 9.7793034741030986, -5.4112214007794783, -2.6462202383364226, 3.810874385784861, -0.46556665564166089, -0.7910917938403027, 0.39944775513081904, -0.15256879272005269, 0.29272210547487532, 0.23785213866614158, -0.94092687168683775, -0.33979696870447529, 0.81538021412703543, -0.87249150801490727, -0.34790283218073798, 0.66306340781427542, -0.20531875198941113, -0.092009003335480025, -0.021339441946329862},
};

}  // namespace

TEST_CASE("frame count follows 1 + floor((S - 512) / 320)") {
  CHECK(audex::compute_mfcc(clip_of(512)).num_frames() == 1);
  CHECK(audex::compute_mfcc(clip_of(831)).num_frames() == 1);
  CHECK(audex::compute_mfcc(clip_of(832)).num_frames() == 2);
  CHECK(audex::compute_mfcc(clip_of(16000)).num_frames() == 49);
  CHECK(audex::compute_mfcc(clip_of(512)).values.cols == 26);
}

TEST_CASE("clips shorter than one frame are rejected") {
  CHECK_AUDEX_ERROR(audex::compute_mfcc(clip_of(511)),
                    audex::ErrorCode::TooShort);
  CHECK_AUDEX_ERROR(audex::compute_mfcc(clip_of(0)),
                    audex::ErrorCode::TooShort);
}

TEST_CASE("all-zero signal lands on the log floor") {
  const audex::MfccMatrix mfcc = audex::compute_mfcc(clip_of(512));
  // every filter energy is exactly the floor, so c0 = sqrt(40) * ln(1e-20)
  const double expected_c0 = std::sqrt(40.0) * std::log(1e-20);
  CHECK(mfcc.values(0, 0) ==
        doctest::Approx(expected_c0).epsilon(1e-12));
  // the higher coefficients are cosine sums of a constant vector: ~0
  for (std::size_t k = 1; k < 26; ++k) {
    CHECK(std::abs(mfcc.values(0, k)) < 1e-9);
  }
}

TEST_CASE("golden chirp matches the NumPy/SciPy reference") {
  const std::string path = std::string(AUDEX_DATA_DIR) + "/golden_sine.wav";
  const audex::AudioClip clip = audex::read_wav(path);
  REQUIRE(clip.samples.size() == 1600);

  const audex::MfccMatrix mfcc = audex::compute_mfcc(clip);
  REQUIRE(mfcc.num_frames() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 26; ++k) {
      const double expected = kGoldenSineMfcc[i][k];
      const double tolerance = 1e-8 * std::max(1.0, std::abs(expected));
      CHECK(std::abs(mfcc.values(i, k) - expected) < tolerance);
    }
  }
}

TEST_CASE("mfcc is deterministic") {
  const std::string path = std::string(AUDEX_DATA_DIR) + "/golden_sine.wav";
  const audex::AudioClip clip = audex::read_wav(path);
  const audex::MfccMatrix a = audex::compute_mfcc(clip);
  const audex::MfccMatrix b = audex::compute_mfcc(clip);
  CHECK(a.values.data == b.values.data);
}

TEST_CASE("frame geometry constants") {
  const audex::MfccMatrix mfcc = audex::compute_mfcc(clip_of(512));
  CHECK(mfcc.frame_length_ms == 32);
  CHECK(mfcc.frame_stride_ms == 20);
}
