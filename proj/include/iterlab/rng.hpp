#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace iterlab {

/// Deterministic pseudo-random stream, fully determined by (seed, stream_index).
/// Distinct stream indices give statistically independent streams; parallel
/// consumers must each own their own index. Uniform and normal variates are
/// produced from the raw 64-bit output directly (Box-Muller for normals), so
/// sequences do not depend on the standard library's distribution objects.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0)
      : seed_(seed), stream_index_(stream_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_),
                      static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(stream_index_),
                      static_cast<std::uint32_t>(stream_index_ >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53 significant bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Two independent N(0, 1) variates via Box-Muller.
  std::pair<double, double> normal_pair() {
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  /// Standard complex normal: Re and Im independent N(0, 1/2), so E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const auto [x, y] = normal_pair();
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return {x * inv_sqrt2, y * inv_sqrt2};
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

}  // namespace iterlab
