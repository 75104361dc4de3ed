#pragma once

// Portable random streams for instance generation.
//
// Generator: SplitMix64 (Steele, Lea, Flood 2014), state advanced by the
// golden-ratio increment 0x9E3779B97F4A7C15 and finalised by the variant-13
// mixer.  Stream splitting: matrix entry t (row-major index) draws from its
// own substream whose initial state is mix64(seed + (t + 1) * 0x9E3779B97F4A7C15).
// Each entry consumes exactly one 64-bit output, so an entry's value depends
// only on (seed, t) and never on the order or number of other draws.
//
// Conversions from a 64-bit output x:
//   uniform   = (x >> 11) * 2^-53                in [0, 1)
//   open      = ((x >> 11) + 0.5) * 2^-53        in (0, 1)
//   normal    = inverse_normal_cdf(open)         (Acklam's rational approximation)
//   bernoulli = uniform < p

#include <cstdint>

namespace adjrobust::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}
  constexpr std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

constexpr SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed + (index + 1) * kGolden));
}

double to_uniform(std::uint64_t x);
double to_open_uniform(std::uint64_t x);

// Standard normal quantile; relative error below 1.15e-9 on (0, 1).
double inverse_normal_cdf(double p);

double uniform(std::uint64_t seed, std::uint64_t index);
double folded_normal(std::uint64_t seed, std::uint64_t index);
bool bernoulli(std::uint64_t seed, std::uint64_t index, double p);

}  // namespace adjrobust::rng
