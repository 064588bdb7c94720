#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "audex/dsp.hpp"
#include "audex/error.hpp"
#include "audex/rng.hpp"

namespace {

// quadratic-time DFT, the independent oracle for the radix-2 FFT
std::vector<std::complex<double>> naive_dft(
    const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * 3.14159265358979323846 *
                           static_cast<double>(k) * static_cast<double>(t) /
                           static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("fft matches the naive DFT on random signals") {
  audex::Rng rng(11);
  for (const std::size_t n : {std::size_t{8}, std::size_t{64}, std::size_t{512}}) {
    std::vector<std::complex<double>> signal(n);
    for (auto& v : signal) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

    std::vector<std::complex<double>> fft = signal;
    audex::dsp::fft_radix2(fft);
    const std::vector<std::complex<double>> dft = naive_dft(signal);

    double max_mag = 0.0;
    for (const auto& v : dft) max_mag = std::max(max_mag, std::abs(v));
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(fft[k] - dft[k]) < 1e-10 * max_mag);
    }
  }
}

TEST_CASE("fft of a pure tone concentrates at the expected bin") {
  const std::size_t n = 512;
  std::vector<std::complex<double>> signal(n);
  for (std::size_t t = 0; t < n; ++t) {
    signal[t] = std::cos(2.0 * 3.14159265358979323846 * 8.0 *
                         static_cast<double>(t) / static_cast<double>(n));
  }
  audex::dsp::fft_radix2(signal);
  // cos splits between bins 8 and n-8, each of magnitude n/2
  CHECK(std::abs(signal[8]) == doctest::Approx(256.0).epsilon(1e-9));
  CHECK(std::abs(signal[504]) == doctest::Approx(256.0).epsilon(1e-9));
  CHECK(std::abs(signal[7]) < 1e-9);
}

TEST_CASE("fft rejects non-power-of-two lengths") {
  std::vector<std::complex<double>> signal(100);
  CHECK_THROWS_AS(audex::dsp::fft_radix2(signal), audex::Error);
}

TEST_CASE("power spectrum has 257 bins and matches |DFT|^2") {
  audex::Rng rng(12);
  std::vector<double> frame(512);
  for (double& v : frame) v = rng.uniform(-1.0, 1.0);

  const std::vector<double> power = audex::dsp::power_spectrum(frame);
  REQUIRE(power.size() == 257);

  std::vector<std::complex<double>> signal(frame.begin(), frame.end());
  const std::vector<std::complex<double>> dft = naive_dft(signal);
  for (std::size_t k = 0; k < power.size(); ++k) {
    CHECK(power[k] == doctest::Approx(std::norm(dft[k])).epsilon(1e-9));
  }
}

TEST_CASE("power spectrum is deterministic") {
  std::vector<double> frame(512);
  for (std::size_t t = 0; t < frame.size(); ++t) {
    frame[t] = std::sin(0.037 * static_cast<double>(t));
  }
  const std::vector<double> a = audex::dsp::power_spectrum(frame);
  const std::vector<double> b = audex::dsp::power_spectrum(frame);
  CHECK(a == b);
}
