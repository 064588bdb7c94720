#include "audex/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "audex/error.hpp"
#include "audex/mfcc.hpp"

namespace audex {

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

void append_escaped(std::string& out, char c) {
  switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    default: out += c;
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string to_hex(const Rgb& color) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", color.r, color.g, color.b);
  return buf;
}

Rgb color_of(double value, double clip) {
  if (!(clip > 0.0)) {
    throw Error(ErrorCode::NonPositiveClip, "clip must be positive");
  }
  const double v = std::clamp(value, -clip, clip) / clip;
  if (v >= 0.0) {
    const int fade = round_half_up(255.0 * (1.0 - v));
    return Rgb{255, fade, fade};
  }
  const int fade = round_half_up(255.0 * (1.0 + v));
  return Rgb{fade, fade, 255};
}

double abs_percentile(const Mat& matrix, double percentile) {
  if (percentile < 0.0 || percentile > 100.0) {
    throw Error(ErrorCode::InvalidArgument, "percentile must be in [0,100]");
  }
  if (matrix.data.empty()) return 0.0;

  std::vector<double> mags(matrix.data.size());
  for (std::size_t i = 0; i < mags.size(); ++i) {
    mags[i] = std::abs(matrix.data[i]);
  }
  std::sort(mags.begin(), mags.end());

  const double rank =
      percentile / 100.0 * static_cast<double>(mags.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  const double frac = rank - static_cast<double>(lo);
  if (lo + 1 >= mags.size()) return mags.back();
  return mags[lo] + frac * (mags[lo + 1] - mags[lo]);
}

Heatmap render_heatmap(const Mat& matrix, const RenderSpec& spec) {
  if (matrix.cols != kNumCoefficients || matrix.rows == 0) {
    throw Error(ErrorCode::ShapeMismatch,
                "heatmap expects an N x 26 matrix with N >= 1");
  }
  if (!matrix.all_finite()) {
    throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  }
  if (spec.cell_width_px == 0 || spec.cell_height_px == 0) {
    throw Error(ErrorCode::InvalidArgument, "cell sizes must be positive");
  }
  if (!(spec.clip_percentile > 50.0) || !(spec.clip_percentile <= 100.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "clip percentile must be in (50,100]");
  }
  if (!spec.axis_labels.empty() && spec.axis_labels.size() != matrix.rows) {
    throw Error(ErrorCode::LabelLengthMismatch,
                "label count " + std::to_string(spec.axis_labels.size()) +
                    " != frame count " + std::to_string(matrix.rows));
  }

  double clip = abs_percentile(matrix, spec.clip_percentile);
  if (clip == 0.0) clip = 1.0;  // all-zero input renders all-white

  const std::size_t frames = matrix.rows;
  const std::size_t bins = matrix.cols;
  const std::size_t cw = spec.cell_width_px;
  const std::size_t ch = spec.cell_height_px;
  const std::size_t margin_left = 34;
  const std::size_t margin_top = 8;
  const std::size_t margin_right = 8;
  const std::size_t plot_w = frames * cw;
  const std::size_t plot_h = bins * ch;
  const std::size_t tick_row = 14;
  const std::size_t label_row = spec.axis_labels.empty() ? 0 : 14;
  const std::size_t width = margin_left + plot_w + margin_right;
  const std::size_t height = margin_top + plot_h + tick_row + label_row + 6;

  std::string svg;
  svg.reserve(frames * bins * 64 + 1024);
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  svg += "<rect width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" fill=\"#FFFFFF\"/>\n";

  // cells, bin 0 at the bottom
  for (std::size_t i = 0; i < frames; ++i) {
    const std::size_t x = margin_left + i * cw;
    for (std::size_t k = 0; k < bins; ++k) {
      const std::size_t y = margin_top + (bins - 1 - k) * ch;
      svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
             "\" width=\"" + std::to_string(cw) + "\" height=\"" +
             std::to_string(ch) + "\" fill=\"" +
             to_hex(color_of(matrix(i, k), clip)) + "\"/>\n";
    }
  }

  // y axis: bin index every 5 bins
  for (std::size_t k = 0; k < bins; k += 5) {
    const std::size_t y = margin_top + (bins - 1 - k) * ch + ch / 2 + 3;
    svg += "<text x=\"" + std::to_string(margin_left - 4) + "\" y=\"" +
           std::to_string(y) +
           "\" font-family=\"monospace\" font-size=\"9\" text-anchor=\"end\" "
           "fill=\"#000000\">" +
           std::to_string(k) + "</text>\n";
  }

  // x axis: frame index every 10 frames
  const std::size_t tick_y = margin_top + plot_h + 11;
  for (std::size_t i = 0; i < frames; i += 10) {
    const std::size_t x = margin_left + i * cw + cw / 2;
    svg += "<text x=\"" + std::to_string(x) + "\" y=\"" +
           std::to_string(tick_y) +
           "\" font-family=\"monospace\" font-size=\"9\" "
           "text-anchor=\"middle\" fill=\"#000000\">" +
           std::to_string(i) + "</text>\n";
  }

  // predicted character beneath each frame
  if (!spec.axis_labels.empty()) {
    const std::size_t label_y = tick_y + 13;
    for (std::size_t i = 0; i < frames; ++i) {
      const std::size_t x = margin_left + i * cw + cw / 2;
      svg += "<text x=\"" + std::to_string(x) + "\" y=\"" +
             std::to_string(label_y) +
             "\" font-family=\"monospace\" font-size=\"8\" "
             "text-anchor=\"middle\" fill=\"#000000\">";
      append_escaped(svg, spec.axis_labels[i]);
      svg += "</text>\n";
    }
  }

  svg += "</svg>\n";

  Heatmap heatmap;
  heatmap.svg = std::move(svg);
  heatmap.clip = clip;
  return heatmap;
}

void export_csv(const Mat& matrix, const std::string& path) {
  if (matrix.cols != kNumCoefficients) {
    throw Error(ErrorCode::ShapeMismatch,
                "CSV export expects 26 columns, got " +
                    std::to_string(matrix.cols));
  }

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);

  out << "frame";
  for (std::size_t k = 0; k < matrix.cols; ++k) out << ",mfcc_" << k;
  out << "\n";
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    out << i;
    for (std::size_t k = 0; k < matrix.cols; ++k) {
      out << ',' << format_number(matrix(i, k));
    }
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace audex
