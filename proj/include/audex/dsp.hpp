#pragma once

#include <complex>
#include <vector>

namespace audex::dsp {

/// In-place iterative radix-2 Cooley-Tukey FFT. Size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& x);

/// One-sided power spectrum |X[k]|^2 of a real frame, k = 0..n/2.
/// Frame length must be a power of two.
std::vector<double> power_spectrum(const std::vector<double>& frame);

}  // namespace audex::dsp
