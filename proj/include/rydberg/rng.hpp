#pragma once

// Reproducible random streams. Every stream is a std::mt19937_64 seeded from
// (seed, stream index) through std::seed_seq, so a stream's content depends only
// on those two numbers and never on scheduling.

#include <cstdint>
#include <random>
#include <string_view>

namespace rydberg {

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sub-seed for a named stage of a command ("ser/rydberg", "calibrate/pilots", ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) {
  return splitmix64(seed ^ fnv1a64(stage));
}

/// A generator plus a standard-normal source drawing from it.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream) : rng_(make_stream(seed, stream)) {}

  double standard_normal() { return normal_(rng_); }
  Rng& engine() { return rng_; }

 private:
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rydberg
