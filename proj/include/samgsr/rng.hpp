#pragma once

#include <cmath>
#include <cstdint>

namespace samgsr {

// SplitMix64 (Steele, Lea, Flood 2014).  Small, fast, and easy to seed from a
// counter, which is what the permutation engine needs: every stream is derived
// from a (seed, index...) tuple, never from shared mutable state, so the draw
// sequence cannot depend on thread scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_open_double() { return 1.0 - next_double(); }

  // Uniform integer in [0, n).  Lemire's multiply-shift; the residual bias of
  // < n / 2^64 is irrelevant at permutation-test scales.
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Standard normal via Box-Muller.  The sine partner is discarded so each
  // call consumes exactly two raw draws; draw counts stay predictable.
  double next_normal() {
    double r = std::sqrt(-2.0 * std::log(next_open_double()));
    double theta = 6.283185307179586476925286766559 * next_double();
    return r * std::cos(theta);
  }

 private:
  uint64_t state_;
};

// Stream derivation: hash-chain the key parts through the SplitMix64 output
// function.  mix_streams(seed, a, b) != mix_streams(seed, b, a) by design.
inline uint64_t mix_stream(uint64_t state, uint64_t key) {
  uint64_t z = state + 0x9e3779b97f4a7c15ull + key * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

template <typename... Keys>
uint64_t mix_streams(uint64_t seed, Keys... keys) {
  uint64_t h = seed;
  ((h = mix_stream(h, static_cast<uint64_t>(keys))), ...);
  return h;
}

// Fisher-Yates shuffle driven by an explicit generator.
template <typename T>
void shuffle(T* data, size_t n, SplitMix64& rng) {
  for (size_t i = n; i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i));
    T tmp = data[i - 1];
    data[i - 1] = data[j];
    data[j] = tmp;
  }
}

}  // namespace samgsr
