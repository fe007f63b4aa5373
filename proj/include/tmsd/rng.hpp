#ifndef TMSD_RNG_HPP
#define TMSD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace tmsd {

/// PCG32 (PCG-XSH-RR 64/32, O'Neill). Chosen so that sample draws and noise
/// streams are reproducible bit-for-bit across platforms and languages.
/// Per-trial streams: Pcg32::for_trial(seed, t) seeds the state with
/// seed ^ (t * 0x9E3779B97F4A7C15) and selects stream id t.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0) {
    state_ = 0u;
    inc_ = (stream << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  static Pcg32 for_trial(std::uint64_t seed, std::uint64_t trial) {
    return Pcg32(seed ^ (trial * 0x9E3779B97F4A7C15ull), trial);
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ull + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  /// Unbiased integer in [0, bound) by rejection.
  std::uint32_t next_below(std::uint32_t bound) {
    std::uint32_t threshold = (-bound) % bound;
    for (;;) {
      std::uint32_t r = next_u32();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0,1) with 53 random mantissa bits.
  double next_double() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 1;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

inline std::vector<double> gaussian_stream(std::uint64_t seed,
                                           std::size_t count) {
  Pcg32 rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = rng.next_gaussian();
  return out;
}

}  // namespace tmsd

#endif  // TMSD_RNG_HPP
