#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace tsketch {

// Identifier of the hash family baked into serialized sketches. Two sketches
// can only be merged or compared when they agree on this.
inline constexpr uint8_t kHashFamilyXxh64 = 1;

namespace detail {

inline constexpr uint64_t kXxPrime1 = 0x9E3779B185EBCA87ull;
inline constexpr uint64_t kXxPrime2 = 0xC2B2AE3D27D4EB4Full;
inline constexpr uint64_t kXxPrime3 = 0x165667B19E3779F9ull;
inline constexpr uint64_t kXxPrime4 = 0x85EBCA77C2B2AE63ull;
inline constexpr uint64_t kXxPrime5 = 0x27D4EB2F165667C5ull;

inline uint64_t rotl64(uint64_t x, int r) noexcept {
  return (x << r) | (x >> (64 - r));
}

// Unaligned little-endian loads; we only target little-endian hosts.
inline uint64_t read64(const unsigned char* p) noexcept {
  uint64_t v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

inline uint32_t read32(const unsigned char* p) noexcept {
  uint32_t v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

inline uint64_t xx_round(uint64_t acc, uint64_t input) noexcept {
  return rotl64(acc + input * kXxPrime2, 31) * kXxPrime1;
}

inline uint64_t xx_merge_round(uint64_t acc, uint64_t val) noexcept {
  return (acc ^ xx_round(0, val)) * kXxPrime1 + kXxPrime4;
}

}  // namespace detail

// Seeded 64-bit xxHash (XXH64), matching the reference implementation
// byte-for-byte so serialized sketches stay portable across builds.
inline uint64_t xxhash64(const void* data, size_t len, uint64_t seed) noexcept {
  using namespace detail;
  const unsigned char* p = static_cast<const unsigned char*>(data);
  const unsigned char* const end = p + len;
  uint64_t h;

  if (len >= 32) {
    uint64_t v1 = seed + kXxPrime1 + kXxPrime2;
    uint64_t v2 = seed + kXxPrime2;
    uint64_t v3 = seed;
    uint64_t v4 = seed - kXxPrime1;
    do {
      v1 = xx_round(v1, read64(p)); p += 8;
      v2 = xx_round(v2, read64(p)); p += 8;
      v3 = xx_round(v3, read64(p)); p += 8;
      v4 = xx_round(v4, read64(p)); p += 8;
    } while (p + 32 <= end);
    h = rotl64(v1, 1) + rotl64(v2, 7) + rotl64(v3, 12) + rotl64(v4, 18);
    h = xx_merge_round(h, v1);
    h = xx_merge_round(h, v2);
    h = xx_merge_round(h, v3);
    h = xx_merge_round(h, v4);
  } else {
    h = seed + kXxPrime5;
  }

  h += static_cast<uint64_t>(len);

  while (p + 8 <= end) {
    h ^= xx_round(0, read64(p));
    h = rotl64(h, 27) * kXxPrime1 + kXxPrime4;
    p += 8;
  }
  if (p + 4 <= end) {
    h ^= static_cast<uint64_t>(read32(p)) * kXxPrime1;
    h = rotl64(h, 23) * kXxPrime2 + kXxPrime3;
    p += 4;
  }
  while (p < end) {
    h ^= static_cast<uint64_t>(*p) * kXxPrime5;
    h = rotl64(h, 11) * kXxPrime1;
    ++p;
  }

  h ^= h >> 33;
  h *= kXxPrime2;
  h ^= h >> 29;
  h *= kXxPrime3;
  h ^= h >> 32;
  return h;
}

inline uint64_t xxhash64(std::string_view s, uint64_t seed) noexcept {
  return xxhash64(s.data(), s.size(), seed);
}

// Per-layer seeds are derived from one master seed with a splitmix64-style
// finalizer so layers hash independently while a single u64 fully
// reproduces the sketch.
inline uint64_t derive_layer_seed(uint64_t master_seed, uint32_t layer_index) noexcept {
  uint64_t z = master_seed + (static_cast<uint64_t>(layer_index) + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace tsketch
