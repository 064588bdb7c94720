#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <doctest.h>

#include "audex/error.hpp"
#include "audex/render.hpp"
#include "audex/rng.hpp"

#include "testutil.hpp"

using testutil::ScratchDir;

namespace {

std::size_t count_occurrences(const std::string& haystack,
                              const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

audex::Mat random_matrix(std::size_t rows, std::uint64_t seed) {
  audex::Rng rng(seed);
  audex::Mat m(rows, 26);
  for (double& v : m.data) v = rng.uniform(-2.0, 2.0);
  return m;
}

}  // namespace

TEST_CASE("colormap anchors are exact") {
  CHECK(audex::color_of(1.0, 1.0) == audex::Rgb{255, 0, 0});
  CHECK(audex::color_of(-1.0, 1.0) == audex::Rgb{0, 0, 255});
  CHECK(audex::color_of(0.0, 1.0) == audex::Rgb{255, 255, 255});
  // midpoint of the positive ramp: 255 * 0.5 = 127.5 rounds half-up to 128
  CHECK(audex::color_of(0.5, 1.0) == audex::Rgb{255, 128, 128});
  CHECK(audex::color_of(-0.5, 1.0) == audex::Rgb{128, 128, 255});
}

TEST_CASE("colormap clamps and scales by the clip value") {
  CHECK(audex::color_of(7.0, 2.0) == audex::Rgb{255, 0, 0});   // beyond +clip
  CHECK(audex::color_of(-9.0, 2.0) == audex::Rgb{0, 0, 255});  // beyond -clip
  CHECK(audex::color_of(1.0, 2.0) == audex::color_of(0.5, 1.0));
}

TEST_CASE("colormap has odd symmetry up to channel swap") {
  for (double v : {0.05, 0.2, 0.33, 0.71, 0.9}) {
    const audex::Rgb pos = audex::color_of(v, 1.0);
    const audex::Rgb neg = audex::color_of(-v, 1.0);
    CHECK(pos.r == neg.b);
    CHECK(pos.g == neg.g);
    CHECK(pos.b == neg.r);
  }
}

TEST_CASE("colormap rejects a non-positive clip") {
  CHECK_AUDEX_ERROR(audex::color_of(0.5, 0.0),
                    audex::ErrorCode::NonPositiveClip);
  CHECK_AUDEX_ERROR(audex::color_of(0.5, -1.0),
                    audex::ErrorCode::NonPositiveClip);
  CHECK_AUDEX_ERROR(audex::color_of(0.5, std::nan("")),
                    audex::ErrorCode::NonPositiveClip);
}

TEST_CASE("hex formatting is uppercase and zero-padded") {
  CHECK(audex::to_hex(audex::Rgb{255, 0, 0}) == "#FF0000");
  CHECK(audex::to_hex(audex::Rgb{10, 11, 12}) == "#0A0B0C");
  CHECK(audex::to_hex(audex::Rgb{255, 255, 255}) == "#FFFFFF");
}

TEST_CASE("absolute percentile interpolates order statistics") {
  audex::Mat m(1, 26);
  for (std::size_t i = 0; i < 26; ++i) {
    m.data[i] = (i % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(i);  // |v| = i
  }
  CHECK(audex::abs_percentile(m, 100.0) == 25.0);
  CHECK(audex::abs_percentile(m, 0.0) == 0.0);
  // rank = 0.5 * 25 = 12.5 -> halfway between |12| and |13|
  CHECK(audex::abs_percentile(m, 50.0) == doctest::Approx(12.5));
  // rank = 0.99 * 25 = 24.75
  CHECK(audex::abs_percentile(m, 99.0) == doctest::Approx(24.75));

  double previous = -1.0;
  for (double p : {10.0, 30.0, 50.0, 70.0, 90.0, 100.0}) {
    const double value = audex::abs_percentile(m, p);
    CHECK(value >= previous);
    previous = value;
  }

  CHECK_AUDEX_ERROR(audex::abs_percentile(m, -1.0),
                    audex::ErrorCode::InvalidArgument);
  CHECK_AUDEX_ERROR(audex::abs_percentile(m, 100.5),
                    audex::ErrorCode::InvalidArgument);
}

TEST_CASE("rendering is byte-deterministic") {
  const audex::Mat m = random_matrix(12, 60);
  audex::RenderSpec spec;
  const audex::Heatmap a = audex::render_heatmap(m, spec);
  const audex::Heatmap b = audex::render_heatmap(m, spec);
  CHECK(a.svg == b.svg);
  CHECK(a.clip == b.clip);
  CHECK(a.clip == audex::abs_percentile(m, spec.clip_percentile));
  CHECK(a.svg.find("<svg") != std::string::npos);
  CHECK(a.svg.find("</svg>") != std::string::npos);
}

TEST_CASE("an all-zero matrix renders white on a unit clip") {
  const audex::Mat zeros(8, 26);
  const audex::Heatmap map = audex::render_heatmap(zeros, audex::RenderSpec{});
  CHECK(map.clip == 1.0);
  // background + 8*26 cells, nothing else: every fill is white
  CHECK(count_occurrences(map.svg, "fill=\"#FFFFFF\"") == 8 * 26 + 1);
  CHECK(count_occurrences(map.svg, "#FF0000") == 0);
  CHECK(count_occurrences(map.svg, "#0000FF") == 0);
}

TEST_CASE("the matrix maximum saturates the positive end") {
  audex::Mat m(4, 26, 0.0);
  m(2, 13) = 5.0;  // unique maximum; the rest stays at zero
  audex::RenderSpec spec;
  spec.clip_percentile = 99.0;  // clip well below the outlier
  const audex::Heatmap map = audex::render_heatmap(m, spec);
  CHECK(count_occurrences(map.svg, "fill=\"#FF0000\"") == 1);
}

TEST_CASE("axis labels are validated and escaped") {
  const audex::Mat m = random_matrix(4, 61);
  audex::RenderSpec spec;

  spec.axis_labels = "ab";  // 2 labels for 4 frames
  CHECK_AUDEX_ERROR(audex::render_heatmap(m, spec),
                    audex::ErrorCode::LabelLengthMismatch);

  spec.axis_labels = "a<b&";
  const audex::Heatmap map = audex::render_heatmap(m, spec);
  CHECK(map.svg.find("&lt;") != std::string::npos);
  CHECK(map.svg.find("&amp;") != std::string::npos);

  spec.axis_labels.clear();
  const audex::Heatmap unlabeled = audex::render_heatmap(m, spec);
  CHECK(unlabeled.svg != map.svg);
}

TEST_CASE("render spec validation") {
  const audex::Mat m = random_matrix(3, 62);

  audex::RenderSpec zero_cell;
  zero_cell.cell_width_px = 0;
  CHECK_AUDEX_ERROR(audex::render_heatmap(m, zero_cell),
                    audex::ErrorCode::InvalidArgument);

  audex::RenderSpec low_percentile;
  low_percentile.clip_percentile = 50.0;  // must be strictly above the median
  CHECK_AUDEX_ERROR(audex::render_heatmap(m, low_percentile),
                    audex::ErrorCode::InvalidArgument);
  low_percentile.clip_percentile = 100.0;
  CHECK(render_heatmap(m, low_percentile).clip > 0.0);

  audex::Mat bad = m;
  bad.data[5] = std::nan("");
  CHECK_AUDEX_ERROR(audex::render_heatmap(bad, audex::RenderSpec{}),
                    audex::ErrorCode::InvalidArgument);

  const audex::Mat wrong_shape(3, 25);
  CHECK_AUDEX_ERROR(audex::render_heatmap(wrong_shape, audex::RenderSpec{}),
                    audex::ErrorCode::ShapeMismatch);
  const audex::Mat empty(0, 26);
  CHECK_AUDEX_ERROR(audex::render_heatmap(empty, audex::RenderSpec{}),
                    audex::ErrorCode::ShapeMismatch);
}

TEST_CASE("csv export") {
  ScratchDir dir;

  SUBCASE("writes a header and one row per frame") {
    audex::Mat m(2, 26);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      m.data[i] = static_cast<double>(i) * 0.25;
    }
    const std::string path = dir.file("out.csv");
    audex::export_csv(m, path);
    const std::string text = testutil::read_file(path);

    REQUIRE(text.rfind("frame,mfcc_0,", 0) == 0);
    CHECK(text.find(",mfcc_25\n") != std::string::npos);
    CHECK(count_occurrences(text, "\n") == 3);  // header + 2 rows
    CHECK(text.find("\n0,") != std::string::npos);
    CHECK(text.find("\n1,") != std::string::npos);
  }
  SUBCASE("values survive the 9-digit round trip") {
    const audex::Mat m = random_matrix(5, 63);
    const std::string path = dir.file("roundtrip.csv");
    audex::export_csv(m, path);
    std::string text = testutil::read_file(path);

    // parse back and compare at the printed precision
    std::vector<double> parsed;
    std::size_t line_start = text.find('\n') + 1;
    while (line_start < text.size()) {
      std::size_t line_end = text.find('\n', line_start);
      std::string line = text.substr(line_start, line_end - line_start);
      std::size_t field_start = line.find(',') + 1;  // skip the frame index
      while (field_start <= line.size()) {
        std::size_t field_end = line.find(',', field_start);
        parsed.push_back(
            std::stod(line.substr(field_start, field_end - field_start)));
        if (field_end == std::string::npos) break;
        field_start = field_end + 1;
      }
      line_start = line_end + 1;
    }
    REQUIRE(parsed.size() == m.data.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      CHECK(std::abs(parsed[i] - m.data[i]) <=
            1e-8 * std::max(1.0, std::abs(m.data[i])));
    }
  }
  SUBCASE("shape and io errors") {
    const audex::Mat narrow(2, 25);
    CHECK_AUDEX_ERROR(audex::export_csv(narrow, dir.file("narrow.csv")),
                      audex::ErrorCode::ShapeMismatch);
    const audex::Mat m = random_matrix(2, 64);
    CHECK_AUDEX_ERROR(
        audex::export_csv(m, dir.path() + "/no_such_dir/out.csv"),
        audex::ErrorCode::IoError);
  }
}
