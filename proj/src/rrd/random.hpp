#pragma once

#include <cstddef>
#include <cstdint>

#include "rrd/tree.hpp"

namespace rrd {

struct Seed {
  std::uint64_t master = 0;
  std::uint64_t stream_index = 0;

  bool operator==(const Seed&) const = default;
};

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Child stream `index` of `seed`: master' = mix64(master ^ golden * index).
constexpr Seed derive_seed(const Seed& seed, std::uint64_t index) noexcept {
  return {mix64(seed.master ^ (kGoldenGamma * index)), index};
}

/// SplitMix64 sequence generator. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}
  explicit constexpr SplitMix64(const Seed& seed) noexcept : state_(seed.master) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~std::uint64_t{0}; }

  constexpr result_type operator()() noexcept { return mix64(state_ += kGoldenGamma); }

  /// Uniform integer in [0, bound) by Lemire's multiply-and-reject method.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Uniform real in [0, 1) with 53 random bits.
  double unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Uniform random tree of size n by Remy's growth process.
Tree sample_tree(std::size_t n, const Seed& seed);

/// Two independent trees, drawn from child streams 0 and 1 of `seed`.
TreePair sample_pair(std::size_t n, const Seed& seed);

}  // namespace rrd
