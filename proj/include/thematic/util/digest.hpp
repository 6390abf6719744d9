#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace thematic {

/// Lowercase hex SHA-256 of the exact bytes of `data`.
std::string sha256_hex(std::string_view data);

/// 64-bit FNV-1a. Stable across platforms; used for mock backends.
constexpr std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// One step of the splitmix64 generator; advances `state`.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace thematic
