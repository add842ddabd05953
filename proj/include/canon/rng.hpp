#pragma once
// Counter-mode pseudorandomness. Every random value is a pure hash of
// (seed, coordinates), so colorings are random-access, replayable from the
// seed alone, and independent of query or thread order.

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace canon {

// splitmix64 step: add the golden-gamma increment, then finalize.
// splitmix_at(seed, i) below therefore equals output i of the reference
// splitmix64 stream seeded with `seed`.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t splitmix_at(std::uint64_t seed, std::uint64_t i) {
  return mix64(seed + i * 0x9E3779B97F4A7C15ULL);
}

// Keyed hash of an edge (a, b) plus a draw counter. Chained full-avalanche
// mixing; collisions across distinct inputs are as good as random.
inline std::uint64_t prf(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t ctr = 0) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return mix64(h ^ ctr);
}

// Unbiased draw from [0, q) given a stream of 64-bit words: rejection
// sampling over the largest prefix of [0, 2^64) divisible by q.
template <class Draw>
std::uint64_t bounded_uniform(std::uint64_t q, Draw&& draw) {
  if (q == 0) throw std::invalid_argument("bounded_uniform: q must be positive");
  const std::uint64_t max64 = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t rem = (max64 % q + 1) % q;  // 2^64 mod q
  const std::uint64_t limit = max64 - rem;
  for (std::uint64_t i = 0;; ++i) {
    std::uint64_t r = draw(i);
    if (r <= limit) return r % q;
  }
}

// Cantor pairing: injective N x N -> N, (x, y) -> (x+y)(x+y+1)/2 + y.
// Overflow-checked so color labels never silently collide.
inline std::uint64_t pair_encode(std::uint64_t x, std::uint64_t y) {
  unsigned __int128 s = static_cast<unsigned __int128>(x) + y;
  // s > 2^33 already forces s(s+1)/2 past 2^64; gating here also keeps the
  // 128-bit product below overflow
  if (s > (static_cast<unsigned __int128>(1) << 33))
    throw std::overflow_error("pair_encode: color label exceeds 64 bits");
  unsigned __int128 v = s * (s + 1) / 2 + y;
  if (v > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("pair_encode: color label exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

}  // namespace canon
