#pragma once

#include <cstddef>
#include <string>

#include "audex/matrix.hpp"

namespace audex {

// ---------------------------------------------------------------------------
// Deterministic SVG heatmaps of N x 26 matrices with a diverging
// blue-white-red colormap and percentile clipping.  Positive values render
// red, negative blue, zero white; the same convention serves nonnegative
// saliency maps, which occupy the white-to-red half.
// ---------------------------------------------------------------------------

struct RenderSpec {
  std::size_t cell_width_px = 4;
  std::size_t cell_height_px = 10;
  double clip_percentile = 99.0;  // in (50, 100]
  std::string axis_labels;        // optional; when set, one char per frame
};

struct Heatmap {
  std::string svg;    // complete SVG 1.1 document, byte-deterministic
  double clip = 0.0;  // values rendered over (-clip, +clip)
};

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;

  bool operator==(const Rgb&) const = default;
};

// "#RRGGBB", uppercase hex
std::string to_hex(const Rgb& color);

// v = clamp(value, -clip, clip) / clip; +1 -> (255,0,0), 0 -> (255,255,255),
// -1 -> (0,0,255), linear in between, channels rounded half-up.
Rgb color_of(double value, double clip);

// percentile of |entries| with linear interpolation between order statistics
// (rank = percentile/100 * (n-1))
double abs_percentile(const Mat& matrix, double percentile);

// One rectangle per cell, frame index on x, MFCC bin on y with bin 0 at the
// bottom, optional per-frame character labels beneath the x axis.  The clip
// value is the spec's percentile of |matrix|; an all-zero matrix clips at 1
// and renders all-white.
Heatmap render_heatmap(const Mat& matrix, const RenderSpec& spec);

// header "frame,mfcc_0,...,mfcc_25"; one row per frame; 9 significant digits
void export_csv(const Mat& matrix, const std::string& path);

}  // namespace audex
