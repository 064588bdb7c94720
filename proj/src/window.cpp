#include "audex/window.hpp"

#include "audex/error.hpp"

namespace audex {

std::vector<FrameWindow> make_windows(const MfccMatrix& mfcc) {
  const std::size_t n = mfcc.num_frames();
  if (n == 0 || mfcc.values.cols != kNumCoefficients) {
    throw Error(ErrorCode::DimensionMismatch, "invalid MFCC matrix shape");
  }

  std::vector<FrameWindow> windows;
  windows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    FrameWindow w;
    w.center_index = i;
    w.values = Mat(kWindowRows, kNumCoefficients);
    for (std::size_t r = 0; r < kWindowRows; ++r) {
      const long long frame = static_cast<long long>(i) + static_cast<long long>(r) -
                              static_cast<long long>(kContextFrames);
      if (frame < 0 || frame >= static_cast<long long>(n)) continue;  // stays zero
      for (std::size_t k = 0; k < kNumCoefficients; ++k) {
        w.values(r, k) = mfcc.values(static_cast<std::size_t>(frame), k);
      }
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace audex
