#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace mctx {

/// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator, so
/// it plugs into the standard and Boost distributions. Chosen over
/// std::mt19937_64 because the particle simulation is bound by variate
/// generation and this engine is several times faster.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  /// State filled from std::seed_seq over both halves of `seed`.
  explicit Xoshiro256pp(std::uint64_t seed = 1) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::array<std::uint32_t, 8> words{};
    seq.generate(words.begin(), words.end());
    for (int i = 0; i < 4; ++i) {
      s_[i] = (static_cast<std::uint64_t>(words[2 * i]) << 32) | words[2 * i + 1];
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  /// Raw state; must not be all zero.
  explicit Xoshiro256pp(const std::array<std::uint64_t, 4>& state) : s_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t out = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return out;
  }

  bool operator==(const Xoshiro256pp&) const = default;

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace mctx
