#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cmlhdc {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// FNV-1a; used to turn stream names into seed salts.
inline constexpr std::uint64_t hash_name(std::string_view name) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Sub-seed for (stream, index) under a root seed. Trial i of an experiment always gets the
// same generator regardless of worker count or scheduling order.
inline constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view stream,
                                           std::uint64_t index = 0) noexcept {
  return splitmix64(splitmix64(root ^ hash_name(stream)) + index);
}

inline Rng make_rng(std::uint64_t root, std::string_view stream, std::uint64_t index = 0) {
  return Rng(derive_seed(root, stream, index));
}

}  // namespace cmlhdc
