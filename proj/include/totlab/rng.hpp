#pragma once

#include <cstdint>
#include <random>

namespace totlab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for the stream attached to configuration `index` under a run seed.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(stream_seed(seed, index));
}

/// Uniform integer in [0, bound). Consumes exactly one engine draw, so the
/// amount of state used per call is fixed and platform independent
/// (std::uniform_int_distribution is not).
inline std::uint64_t draw_below(Rng& rng, std::uint64_t bound) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(rng()) * bound;
  return static_cast<std::uint64_t>(wide >> 64);
}

/// Fair coin; one engine draw.
inline bool draw_bit(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace totlab
