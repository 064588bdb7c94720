#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace audex {

/// Deterministic random source. mt19937_64 has a fully specified sequence,
/// and all derived draws below avoid std::*_distribution (whose output is
/// implementation-defined), so identical seeds give identical streams on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased draw in [0, n) by rejection.
  std::uint64_t bounded(std::uint64_t n) {
    // 2^64 mod n, computed without 128-bit arithmetic
    const std::uint64_t rem = (UINT64_MAX % n + 1) % n;
    const std::uint64_t limit = UINT64_MAX - rem;
    std::uint64_t x = gen_();
    while (x > limit) x = gen_();
    return x % n;
  }

  /// Fisher-Yates shuffle driven by bounded().
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace audex
