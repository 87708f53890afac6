#pragma once

#include <cstdint>

namespace spectral_walks {

/// SplitMix64 output finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

/// Counter-based generator: draw k of stream s under seed is
///   mix64(key + k·γ),  key = mix64(mix64(seed) + (s + 1)·γ'),
/// so any (seed, stream, k) is addressable without sequential state and
/// streams for different paths never interact.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStreamGamma = 0xd1b54a32d192ed03ULL;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(mix64(seed) + (stream + 1) * kStreamGamma)) {}

  constexpr std::uint64_t next() { return mix64(key_ + (++counter_) * kGamma); }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11U) * 0x1.0p-53; }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace spectral_walks
