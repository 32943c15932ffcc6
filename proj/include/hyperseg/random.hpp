#pragma once

// Counter-based deterministic randomness. Everything here is a pure function of
// its inputs so results never depend on call order or thread count. The
// standard <random> distributions are avoided on purpose: their output is
// implementation-defined and would differ between standard libraries.

#include <cstdint>
#include <string_view>

namespace hyperseg::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

// 64-bit key for a (seed, token) pair.
[[nodiscard]] constexpr std::uint64_t token_key(std::uint64_t seed, std::string_view token) noexcept {
  return mix64(mix64(seed ^ 0x5bf03635f0b7a54dULL) + fnv1a64(token));
}

// Element `index` of the stream identified by `key`.
[[nodiscard]] constexpr std::uint64_t stream_word(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64(key + (index + 1) * kGoldenGamma);
}

// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform integer in [0, bound) by rejection. bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x = (*this)();
    while (x >= limit) x = (*this)();
    return x % bound;
  }

  // Uniform double in [0, 1).
  constexpr double unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace hyperseg::rng
