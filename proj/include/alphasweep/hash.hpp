#pragma once

#include <cstdint>
#include <string_view>

namespace alphasweep {

/// 64-bit FNV-1a; stable across platforms, used for config and plan fingerprints.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 14695981039346656037ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace alphasweep
