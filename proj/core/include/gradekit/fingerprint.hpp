#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gradekit {

/// FNV-1a 64-bit. Used for prompt fingerprints, cache keys, config
/// fingerprints and trace checksums; stability across platforms matters more
/// than collision resistance here.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull) {
    std::uint64_t hash = seed;
    for (const char c : data) {
        hash ^= static_cast<std::uint8_t>(c);
        hash *= 1099511628211ull;
    }
    return hash;
}

inline std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

inline std::string fingerprint_hex(std::string_view data) { return to_hex(fnv1a64(data)); }

}  // namespace gradekit
