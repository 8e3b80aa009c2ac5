#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace finecog {

/// FNV-1a 64-bit. Used to pin data files (prompt templates, worlds) to the
/// content they were authored with; not a cryptographic hash.
inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

} // namespace finecog
