#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace schottky {

// 64-bit FNV-1a. Used for group fingerprints and config hashes; those end
// up in cache file names and output headers, so the hash must be stable
// across runs and platforms.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// 17 significant digits round-trips an IEEE double exactly; this is the
// canonical textual form used by CSV output, config echo, and hashing.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string format_hex16(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace schottky
