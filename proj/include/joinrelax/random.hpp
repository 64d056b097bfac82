#pragma once

#include <cstdint>
#include <string_view>

namespace joinrelax {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a, used wherever a hash must be stable across runs and platforms.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform in the open interval (0, 1) from 53 random bits.
inline double open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Seed of search front `i` derived from a base seed. Front 0 keeps the base seed, so the
// seed set of k fronts is a prefix of the seed set of k+1 fronts.
inline std::uint64_t front_seed(std::uint64_t base, std::uint64_t front) {
  return front == 0 ? base : splitmix64(base ^ (front * 0xd1b54a32d192ed03ULL));
}

}  // namespace joinrelax
