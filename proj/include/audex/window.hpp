#pragma once

#include <vector>

#include "audex/matrix.hpp"
#include "audex/mfcc.hpp"

namespace audex {

inline constexpr std::size_t kContextFrames = 9;                      // each side
inline constexpr std::size_t kWindowRows = 2 * kContextFrames + 1;    // 19
inline constexpr std::size_t kWindowFeatures = kWindowRows * kNumCoefficients;  // 494

/// 19 x 26 context block centered on one time frame: 9 past rows, the frame
/// itself at row 9, 9 future rows. Rows that fall outside the clip are zero.
struct FrameWindow {
  Mat values;                // 19 x 26
  std::size_t center_index = 0;

  std::vector<double> flatten() const { return values.data; }  // row-major, j*26+k
};

/// One window per frame. Window row r holds frame center + r - 9, or zeros
/// when that index is outside [0, N).
std::vector<FrameWindow> make_windows(const MfccMatrix& mfcc);

}  // namespace audex
