#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ciu {

// FNV-1a, 64 bit. Fixed hash for feature bucketing and content fingerprints;
// never replace with std::hash (implementation-defined, would break
// reproducibility).
inline uint64_t fnv1a64(std::string_view bytes, uint64_t h = 0xCBF29CE484222325ull) {
  for (const char c : bytes) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace ciu
